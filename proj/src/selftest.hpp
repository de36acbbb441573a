#ifndef RANKDEC_SELFTEST_HPP
#define RANKDEC_SELFTEST_HPP

#include <string>
#include <vector>

#include "matrix.hpp"

namespace rankdec::selftest {

struct CheckResult {
  std::string name;
  std::string tolerance;
  bool pass = false;
  std::string detail;
};

struct Options {
  bool full = false;           // include the 1e5-draw uniformity suites
  bool inject_failure = false; // deliberately perturb one constant
  std::uint64_t seed = 0xDEC0DE;
};

std::vector<CheckResult> run(const Options& opt);

// --- oracle building blocks, also used by the test suites -------------------

// every full-rank delta x n RREF matrix, i.e. one canonical representative
// per element of Gr(F_q^n, delta)
std::vector<FqMat> enumerate_subspaces(std::size_t n, std::size_t delta, const PrimeField& F);

std::size_t intersection_dim(const FqMat& U, const FqMat& V, const PrimeField& F);

// survival function of the chi-square distribution with dof degrees
double chi2_survival(double chi2, double dof);

} // namespace rankdec::selftest

#endif
