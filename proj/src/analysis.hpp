#ifndef RANKDEC_ANALYSIS_HPP
#define RANKDEC_ANALYSIS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <utility>

namespace rankdec::analysis {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// log2 of exact quantities, extracted from >= 64 leading bits of mantissa
double log2_int(const BigInt& v);
double log2_rat(const BigRat& v);

struct ParamSet {
  long q = 2, m = 0, n = 0, k = 0, w = 0;

  void validate() const;
  long dmin() const { return n - k; }               // n - k (d = n-k+1)
  long two_xi() const { return 2 * w - (n - k); }   // always an integer
  long unique_radius() const { return (n - k) / 2; }
  bool beyond_unique() const { return 2 * w > n - k; }
};

// --- combinatorics --------------------------------------------------------

// [a choose b]_q, exact; 0 when b < 0 or b > a
BigInt gaussian_binomial(long a, long b, long q);
// number of vectors in F_{q^m}^n of rank exactly j
BigInt count_rank_vectors(long m, long n, long j, long q);
BigInt binomial(long n, long k);
BigInt factorial(long n);

// --- sphere/ball counting over the code ----------------------------------

// Pr over uniform r of landing within rank distance w of a fixed point:
// sum_{j<=w} count_rank_vectors / q^{mn}
BigRat ball_probability(const ParamSet& ps);
// Expected candidate count N = max(q^{mk} * ball_probability, 1)
BigRat expected_candidates(const ParamSet& ps);

// average number of codewords at rank distance exactly j from a uniform word
BigRat avg_codewords_at_distance(const ParamSet& ps, long j);

// --- subspace intersection probabilities ----------------------------------

// Pr[dim(U cap V) >= omega] for fixed u-dim U and uniform v-dim V in F_q^l,
// and its closed-form upper bound (as log2).
BigRat intersection_prob_exact(long l, long u, long v, long omega, long q);
double intersection_prob_bound_log2(long l, long u, long v, long omega, long q);

// Probability that a uniform delta-dimensional row-space guess lets the
// error-erasure decoder reach the codeword at rank distance j; exact value
// and closed-form upper bound. Certain when 2j + delta <= n - k.
BigRat guess_success_prob(long n, long k, long delta, long j, long q);
double guess_success_bound_log2(long n, long k, long delta, long j, long q);

// Success probability of decoding a row/column split guess (dr, dc) to the
// specific codeword at distance w (joint guessing bound).
BigRat joint_guess_success_prob(long n, long k, long m, long w, long dr, long dc, long q);

// --- per-iteration success and work factors --------------------------------

// Success model for one iteration of the randomized decoder:
//  ErasureOnly       - the iteration runs only the erasure-aided decode;
//                      weight-j errors are certain only when 2j+delta <= n-k.
//  WithPlainFallback - the iteration is also credited with a plain
//                      (erasure-free) decode, so every j <= (n-k)/2 is
//                      certain. This is the accounting behind the published
//                      work-factor table.
//  DominantTerm      - keep only the weight-w term of the sum.
enum class SuccessModel { ErasureOnly, WithPlainFallback, DominantTerm };

BigRat iteration_success_prob(const ParamSet& ps, long delta,
                              SuccessModel model = SuccessModel::WithPlainFallback);
double iteration_success_bound_log2(const ParamSet& ps, long delta);

// min over delta in [2xi, n-k] of n^2 / iteration_success_prob; the exact
// rational objective is scanned over every delta (ties to the smaller one).
// Requires floor((n-k)/2) < w <= n-k.
std::pair<double, long> randomized_work_factor(const ParamSet& ps,
                                               SuccessModel model = SuccessModel::WithPlainFallback);

// closed-form lower/upper bounds on the randomized-decoder work factor
double work_factor_lower_log2(const ParamSet& ps);
double work_factor_upper_log2(const ParamSet& ps);

// generic and key-equation attack work factors (log2)
double wf_combinatorial_log2(const ParamSet& ps, bool include_poly = true);
double wf_pq_combinatorial_log2(const ParamSet& ps, bool include_poly = true);
double wf_algebraic_log2(const ParamSet& ps);
double wf_key_log2(const ParamSet& ps); // requires w > floor((n-k)/2)

// delta minimizing the randomized work factor (0 below the unique radius)
long choose_delta(const ParamSet& ps);

// --- assembled report -------------------------------------------------------

struct WorkFactorReport {
  ParamSet params;
  std::optional<double> w_rd;        // log2
  std::optional<long> delta_star;
  std::optional<double> w_rd_lower;
  std::optional<double> w_rd_upper;
  double w_comb = 0;
  double w_comb_over_n = 0;
  double w_pq_comb = 0;
  double w_alg = 0;
  std::optional<double> w_key;
  std::optional<double> success_prob_log2; // per-iteration, at delta_star
  double log2_candidates = 0;              // log2 N
};

struct ReportOptions {
  bool include_poly = true;
  SuccessModel model = SuccessModel::WithPlainFallback;
};

WorkFactorReport report(const ParamSet& ps, const ReportOptions& opt = {});

std::string report_to_json(const WorkFactorReport& rep);
std::string report_to_csv_header();
std::string report_to_csv(const WorkFactorReport& rep);
std::string report_to_table(const WorkFactorReport& rep);

} // namespace rankdec::analysis

#endif
