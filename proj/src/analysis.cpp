#include "analysis.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace rankdec::analysis {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

namespace {

constexpr double kLinAlgExponent = 2.807; // omega for the algebraic solver cost

BigInt ipow(long q, long e) {
  BigInt r = 1;
  BigInt base = q;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// d is positive for cpp_rational; cpp_int division truncates toward zero,
// which already is the ceiling for negative values
long rat_ceil(const BigRat& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt c = n / d;
  if (c * d != n && n > 0) ++c;
  return c.convert_to<long>();
}

double log2q(long q) { return std::log2(static_cast<double>(q)); }

} // namespace

double log2_int(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log2 of non-positive value");
  const std::size_t bits = boost::multiprecision::msb(v);
  if (bits <= 62) return std::log2(v.convert_to<double>());
  BigInt top = v >> (bits - 62);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 62);
}

double log2_rat(const BigRat& v) {
  if (v <= 0) throw std::domain_error("log2 of non-positive value");
  return log2_int(numerator(v)) - log2_int(denominator(v));
}

void ParamSet::validate() const {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (n < 1 || n > m) throw std::invalid_argument("need 1 <= n <= m");
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
  if (w < 0 || w > n) throw std::invalid_argument("need 0 <= w <= n");
}

BigInt gaussian_binomial(long a, long b, long q) {
  if (b < 0 || b > a) return 0;
  if (b == 0 || b == a) return 1;
  thread_local std::map<std::tuple<long, long, long>, BigInt> cache;
  auto key = std::make_tuple(a, b, q);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // every prefix of the product is itself a Gaussian binomial, so each
  // division is exact
  BigInt g = 1;
  for (long i = 0; i < b; ++i) {
    g *= ipow(q, a - i) - 1;
    BigInt d = ipow(q, i + 1) - 1;
    BigInt r;
    boost::multiprecision::divide_qr(g, d, g, r);
    if (r != 0) throw std::logic_error("gaussian binomial division not exact");
  }
  cache.emplace(key, g);
  return g;
}

BigInt count_rank_vectors(long m, long n, long j, long q) {
  if (j < 0 || j > std::min(m, n)) return 0;
  thread_local std::map<std::tuple<long, long, long, long>, BigInt> cache;
  auto key = std::make_tuple(m, n, j, q);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  BigInt c = gaussian_binomial(n, j, q);
  for (long i = 0; i < j; ++i) c *= ipow(q, m) - ipow(q, i);
  cache.emplace(key, c);
  return c;
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt factorial(long n) {
  BigInt r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

BigRat ball_probability(const ParamSet& ps) {
  ps.validate();
  BigInt ball = 0;
  for (long j = 0; j <= ps.w; ++j) ball += count_rank_vectors(ps.m, ps.n, j, ps.q);
  return BigRat(ball, ipow(ps.q, ps.m * ps.n));
}

BigRat expected_candidates(const ParamSet& ps) {
  BigRat N = BigRat(ipow(ps.q, ps.m * ps.k)) * ball_probability(ps);
  if (N < 1) return BigRat(1);
  return N;
}

BigRat avg_codewords_at_distance(const ParamSet& ps, long j) {
  return BigRat(count_rank_vectors(ps.m, ps.n, j, ps.q), ipow(ps.q, ps.m * (ps.n - ps.k)));
}

BigRat intersection_prob_exact(long l, long u, long v, long omega, long q) {
  if (u < 0 || v < 0 || u > l || v > l) throw std::invalid_argument("subspace dimensions out of range");
  long lo = std::max(omega, 0L);
  long hi = std::min(u, v);
  if (lo > hi) return BigRat(0);
  BigInt s = 0;
  for (long i = lo; i <= hi; ++i)
    s += gaussian_binomial(l - u, v - i, q) * gaussian_binomial(u, i, q) * ipow(q, (u - i) * (v - i));
  return BigRat(s, gaussian_binomial(l, v, q));
}

double intersection_prob_bound_log2(long l, long u, long v, long omega, long q) {
  // 16 (min(u,v)+1-omega) q^{(j*-v)(l-u-j*)}, j* = min(v-omega, (l+v-u)/2)
  BigRat js = std::min(BigRat(v - omega), BigRat(l + v - u, 2));
  BigRat expo = (js - v) * (BigRat(l - u) - js);
  double c = 16.0 * static_cast<double>(std::min(u, v) + 1 - omega);
  return std::log2(c) + expo.convert_to<double>() * log2q(q);
}

BigRat guess_success_prob(long n, long k, long delta, long j, long q) {
  if (delta < 0 || delta > n) throw std::invalid_argument("guess dimension out of range");
  if (j < 0 || j > n) throw std::invalid_argument("error weight out of range");
  if (2 * j + delta <= n - k) return BigRat(1);
  // smallest intersection dimension that leaves the residual inside the
  // erasure-augmented capacity: ceil(j - (n-k)/2 + delta/2)
  long lo = rat_ceil(BigRat(2 * j - (n - k) + delta, 2));
  long hi = std::min(delta, j);
  if (lo > hi) return BigRat(0);
  BigInt s = 0;
  for (long i = std::max(lo, 0L); i <= hi; ++i)
    s += gaussian_binomial(n - j, delta - i, q) * gaussian_binomial(j, i, q) * ipow(q, (j - i) * (delta - i));
  return BigRat(s, gaussian_binomial(n, delta, q));
}

double guess_success_bound_log2(long n, long k, long delta, long j, long q) {
  long ec = rat_ceil(BigRat(delta, 2) + BigRat(2 * j - (n - k), 2));
  long cd2 = (delta + 1) / 2; // ceil(delta/2)
  BigRat expo = BigRat(-ec) * (BigRat(n + k, 2) - cd2);
  return std::log2(16.0 * static_cast<double>(n)) + expo.convert_to<double>() * log2q(q);
}

BigRat joint_guess_success_prob(long n, long k, long m, long w, long dr, long dc, long q) {
  if (dr < 0 || dr > n || dc < 0 || dc > m) throw std::invalid_argument("guess split out of range");
  long delta = dr + dc;
  long lo = rat_ceil(BigRat(2 * w - (n - k), 2) + BigRat(delta, 2));
  long hi = std::min(delta, w);
  if (lo > hi) return BigRat(0);
  BigInt s = 0;
  for (long i = std::max(lo, 0L); i <= hi; ++i) {
    for (long wr = std::max(0L, i - dc); wr <= std::min({i, dr, w}); ++wr) {
      long wc = i - wr;
      if (wc > w) continue;
      s += gaussian_binomial(n - w, dr - wr, q) * gaussian_binomial(w, wr, q) * ipow(q, (w - wr) * (dr - wr)) *
           gaussian_binomial(m - w, dc - wc, q) * gaussian_binomial(w, wc, q) * ipow(q, (w - wc) * (dc - wc));
    }
  }
  return BigRat(s, gaussian_binomial(n, dr, q) * gaussian_binomial(m, dc, q));
}

BigRat iteration_success_prob(const ParamSet& ps, long delta, SuccessModel model) {
  ps.validate();
  if (delta < 0 || delta > ps.n - ps.k) throw std::invalid_argument("delta outside [0, n-k]");
  const BigInt denom = ipow(ps.q, ps.m * (ps.n - ps.k));
  if (model == SuccessModel::DominantTerm) {
    return BigRat(count_rank_vectors(ps.m, ps.n, ps.w, ps.q), denom) *
           guess_success_prob(ps.n, ps.k, delta, ps.w, ps.q);
  }
  BigRat total = 0;
  for (long j = 0; j <= ps.w; ++j) {
    BigRat aj(count_rank_vectors(ps.m, ps.n, j, ps.q), denom);
    BigRat pj;
    if (model == SuccessModel::WithPlainFallback && 2 * j <= ps.n - ps.k)
      pj = 1;
    else
      pj = guess_success_prob(ps.n, ps.k, delta, j, ps.q);
    total += aj * pj;
  }
  return total;
}

double iteration_success_bound_log2(const ParamSet& ps, long delta) {
  long ec = rat_ceil(BigRat(delta, 2) + BigRat(2 * ps.w - (ps.n - ps.k), 2));
  long cd2 = (delta + 1) / 2;
  BigRat expo = BigRat(ps.m * (ps.k - ps.n) + ps.w * (ps.n + ps.m) - ps.w * ps.w) -
                BigRat(ec) * (BigRat(ps.n + ps.k, 2) - cd2);
  return std::log2(64.0 * static_cast<double>(ps.n)) + expo.convert_to<double>() * log2q(ps.q);
}

std::pair<double, long> randomized_work_factor(const ParamSet& ps, SuccessModel model) {
  ps.validate();
  if (!ps.beyond_unique() || ps.w > ps.n - ps.k)
    throw std::invalid_argument("work-factor minimization requires floor((n-k)/2) < w <= n-k");
  const long lo = std::max(ps.two_xi(), 0L);
  BigRat best_p = -1;
  long best_delta = lo;
  for (long delta = lo; delta <= ps.n - ps.k; ++delta) {
    BigRat p = iteration_success_prob(ps, delta, model);
    if (p > best_p) { // strict: ties keep the smaller delta
      best_p = p;
      best_delta = delta;
    }
  }
  if (best_p <= 0) throw std::logic_error("success probability vanished over the whole delta range");
  BigRat wf = BigRat(static_cast<long>(ps.n) * ps.n) / best_p;
  return {log2_rat(wf), best_delta};
}

namespace {
BigRat bound_exponent(const ParamSet& ps) {
  BigRat xi(ps.two_xi(), 2);
  BigRat guess_gain = BigRat(2) * xi * (BigRat(ps.n + ps.k, 2) - xi);
  BigRat cap = std::min(guess_gain, BigRat(ps.w * ps.k));
  return BigRat(ps.m * (ps.n - ps.k) - ps.w * (ps.n + ps.m) + ps.w * ps.w) + cap;
}
} // namespace

double work_factor_lower_log2(const ParamSet& ps) {
  return std::log2(static_cast<double>(ps.n) / 64.0) + bound_exponent(ps).convert_to<double>() * log2q(ps.q);
}

double work_factor_upper_log2(const ParamSet& ps) {
  return 2.0 * std::log2(static_cast<double>(ps.n)) + bound_exponent(ps).convert_to<double>() * log2q(ps.q);
}

namespace {
long comb_exponent(const ParamSet& ps) {
  long ceil_term = rat_ceil(BigRat((ps.k + 1) * ps.m, ps.n));
  return ps.w * ceil_term - ps.m;
}
double poly_log2(const ParamSet& ps) { return 3.0 * std::log2(static_cast<double>((ps.n - ps.k) * ps.m)); }
} // namespace

double wf_combinatorial_log2(const ParamSet& ps, bool include_poly) {
  double e = static_cast<double>(comb_exponent(ps)) * log2q(ps.q);
  return include_poly ? poly_log2(ps) + e : e;
}

double wf_pq_combinatorial_log2(const ParamSet& ps, bool include_poly) {
  double e = 0.5 * static_cast<double>(comb_exponent(ps)) * log2q(ps.q);
  return include_poly ? poly_log2(ps) + e : e;
}

double wf_algebraic_log2(const ParamSet& ps) {
  // degree-w system only when overdetermined: m*C(n-k-1, w) >= C(n, w)
  bool overdetermined = BigInt(ps.m) * binomial(ps.n - ps.k - 1, ps.w) >= binomial(ps.n, ps.w);
  long e = overdetermined ? ps.w : ps.w + 1;
  BigInt base = ipow(static_cast<long>((ps.m + ps.n) * ps.w), e);
  return kLinAlgExponent * (log2_int(base) - log2_int(factorial(e)));
}

double wf_key_log2(const ParamSet& ps) {
  if (!ps.beyond_unique()) throw std::invalid_argument("key-equation work factor requires w > floor((n-k)/2)");
  double n2 = 2.0 * std::log2(static_cast<double>(ps.n));
  return n2 + static_cast<double>(ps.m * ps.two_xi()) * log2q(ps.q) - log2_rat(expected_candidates(ps));
}

long choose_delta(const ParamSet& ps) {
  ps.validate();
  if (!ps.beyond_unique()) return 0;
  return randomized_work_factor(ps).second;
}

WorkFactorReport report(const ParamSet& ps, const ReportOptions& opt) {
  ps.validate();
  WorkFactorReport rep;
  rep.params = ps;
  rep.w_comb = wf_combinatorial_log2(ps, opt.include_poly);
  rep.w_pq_comb = wf_pq_combinatorial_log2(ps, opt.include_poly);
  rep.w_alg = wf_algebraic_log2(ps);
  rep.log2_candidates = log2_rat(expected_candidates(ps));
  rep.w_comb_over_n = rep.w_comb - rep.log2_candidates;
  if (ps.beyond_unique()) {
    rep.w_key = wf_key_log2(ps);
    if (ps.w <= ps.n - ps.k) {
      auto [wf, ds] = randomized_work_factor(ps, opt.model);
      rep.w_rd = wf;
      rep.delta_star = ds;
      rep.w_rd_lower = work_factor_lower_log2(ps);
      rep.w_rd_upper = work_factor_upper_log2(ps);
      rep.success_prob_log2 = log2_rat(iteration_success_prob(ps, ds, opt.model));
    }
  } else {
    // within the unique radius a single deterministic decode suffices
    rep.w_rd = 2.0 * std::log2(static_cast<double>(ps.n));
    rep.delta_star = 0;
    rep.success_prob_log2 = 0.0;
  }
  return rep;
}

namespace {
nlohmann::json opt_num(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}
} // namespace

std::string report_to_json(const WorkFactorReport& rep) {
  nlohmann::json j;
  j["params"] = {{"q", rep.params.q}, {"m", rep.params.m}, {"n", rep.params.n}, {"k", rep.params.k}, {"w", rep.params.w}};
  nlohmann::json l;
  l["W_RD"] = opt_num(rep.w_rd);
  l["delta_star"] = rep.delta_star ? nlohmann::json(*rep.delta_star) : nlohmann::json(nullptr);
  l["W_RD_lower"] = opt_num(rep.w_rd_lower);
  l["W_RD_upper"] = opt_num(rep.w_rd_upper);
  l["W_Comb"] = rep.w_comb;
  l["W_Comb_over_N"] = rep.w_comb_over_n;
  l["W_PQComb"] = rep.w_pq_comb;
  l["W_Alg"] = rep.w_alg;
  l["W_Key"] = opt_num(rep.w_key);
  l["success_prob"] = opt_num(rep.success_prob_log2);
  j["log2"] = l;
  return j.dump(2);
}

std::string report_to_csv_header() {
  return "q,m,n,k,w,delta_star,W_RD,W_RD_lower,W_RD_upper,W_Comb,W_Comb_over_N,W_PQComb,W_Alg,W_Key,success_prob";
}

namespace {
std::string fmt2(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}
std::string fmt2(double v) { return fmt2(std::optional<double>(v)); }
} // namespace

std::string report_to_csv(const WorkFactorReport& rep) {
  std::ostringstream os;
  os << rep.params.q << ',' << rep.params.m << ',' << rep.params.n << ',' << rep.params.k << ',' << rep.params.w << ',';
  if (rep.delta_star) os << *rep.delta_star;
  os << ',' << fmt2(rep.w_rd) << ',' << fmt2(rep.w_rd_lower) << ',' << fmt2(rep.w_rd_upper) << ',' << fmt2(rep.w_comb)
     << ',' << fmt2(rep.w_comb_over_n) << ',' << fmt2(rep.w_pq_comb) << ',' << fmt2(rep.w_alg) << ',' << fmt2(rep.w_key)
     << ',' << fmt2(rep.success_prob_log2);
  return os.str();
}

std::string report_to_table(const WorkFactorReport& rep) {
  std::ostringstream os;
  auto line = [&](const char* name, const std::string& v) {
    os << "  " << name;
    for (std::size_t i = std::char_traits<char>::length(name); i < 16; ++i) os << ' ';
    os << v << '\n';
  };
  os << "parameters: q=" << rep.params.q << " m=" << rep.params.m << " n=" << rep.params.n << " k=" << rep.params.k
     << " w=" << rep.params.w << '\n';
  line("delta*", rep.delta_star ? std::to_string(*rep.delta_star) : "-");
  line("W_RD", rep.w_rd ? "2^" + fmt2(rep.w_rd) : "-");
  line("W_RD_lower", rep.w_rd_lower ? "2^" + fmt2(rep.w_rd_lower) : "-");
  line("W_RD_upper", rep.w_rd_upper ? "2^" + fmt2(rep.w_rd_upper) : "-");
  line("W_Comb", "2^" + fmt2(rep.w_comb));
  line("W_Comb/N", "2^" + fmt2(rep.w_comb_over_n));
  line("W_PQComb", "2^" + fmt2(rep.w_pq_comb));
  line("W_Alg", "2^" + fmt2(rep.w_alg));
  line("W_Key", rep.w_key ? "2^" + fmt2(rep.w_key) : "-");
  line("success_prob", rep.success_prob_log2 ? "2^" + fmt2(rep.success_prob_log2) : "-");
  return os.str();
}

} // namespace rankdec::analysis
