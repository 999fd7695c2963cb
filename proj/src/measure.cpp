#include "pdyn/measure.hpp"

#include "pdyn/errors.hpp"

#include <cmath>

namespace pdyn {

namespace {

using Matrix = std::vector<std::vector<Rat>>;

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  size_t n = a.size();
  Matrix c(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

Matrix mat_pow(Matrix base, long long e) {
  size_t n = base.size();
  Matrix r(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  while (e > 0) {
    if (e & 1) r = mat_mul(r, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return r;
}

}  // namespace

BernoulliMeasure make_bernoulli(std::vector<Rat> probs) {
  Rat sum(0);
  for (auto& p : probs) {
    if (p < 0) throw Error("PreconditionViolation", "negative probability");
    sum += p;
  }
  if (sum != 1) throw Error("PreconditionViolation", "probabilities must sum to exactly 1");
  return BernoulliMeasure{std::move(probs)};
}

MarkovMeasure make_markov(std::vector<std::vector<Rat>> P, std::vector<Rat> pi) {
  size_t n = P.size();
  if (pi.size() != n) throw Error("PreconditionViolation", "pi/P size mismatch");
  Rat pisum(0);
  for (size_t i = 0; i < n; ++i) {
    if (P[i].size() != n) throw Error("PreconditionViolation", "P must be square");
    Rat row(0);
    for (auto& v : P[i]) {
      if (v < 0) throw Error("PreconditionViolation", "negative transition probability");
      row += v;
    }
    if (row != 1) throw Error("PreconditionViolation", "P rows must sum to exactly 1");
    if (pi[i] < 0) throw Error("PreconditionViolation", "negative stationary probability");
    pisum += pi[i];
  }
  if (pisum != 1) throw Error("PreconditionViolation", "pi must sum to exactly 1");
  for (size_t j = 0; j < n; ++j) {
    Rat s(0);
    for (size_t i = 0; i < n; ++i) s += pi[i] * P[i][j];
    if (s != pi[j]) throw Error("PreconditionViolation", "pi P = pi fails exactly");
  }
  return MarkovMeasure{std::move(P), std::move(pi)};
}

int measure_alphabet(const MeasureModel& m) {
  if (const auto* b = std::get_if<BernoulliMeasure>(&m)) return (int)b->probs.size();
  if (const auto* mk = std::get_if<MarkovMeasure>(&m)) return (int)mk->pi.size();
  return 0;
}

Rat cylinder_measure(const MeasureModel& m, const std::map<long long, char>& constraints) {
  if (constraints.empty()) return Rat(1);
  if (const auto* b = std::get_if<BernoulliMeasure>(&m)) {
    Rat prod(1);
    for (auto& [idx, c] : constraints) {
      (void)idx;
      size_t s = static_cast<size_t>(c - '0');
      if (s >= b->probs.size())
        throw Error("MeasureSystemMismatch", "symbol outside measure alphabet");
      prod *= b->probs[s];
    }
    return prod;
  }
  if (const auto* mk = std::get_if<MarkovMeasure>(&m)) {
    // stationary chain: pi(s_first), then (P^gap)[s_prev][s_next] along the
    // sorted constraint positions
    auto it = constraints.begin();
    size_t s0 = static_cast<size_t>(it->second - '0');
    if (s0 >= mk->pi.size())
      throw Error("MeasureSystemMismatch", "symbol outside measure alphabet");
    Rat prob = mk->pi[s0];
    auto prev = it;
    for (++it; it != constraints.end(); ++it, ++prev) {
      long long gap = it->first - prev->first;
      size_t sa = static_cast<size_t>(prev->second - '0');
      size_t sb = static_cast<size_t>(it->second - '0');
      if (sb >= mk->pi.size())
        throw Error("MeasureSystemMismatch", "symbol outside measure alphabet");
      prob *= mat_pow(mk->P, gap)[sa][sb];
      if (prob == 0) return prob;
    }
    return prob;
  }
  throw Error("MeasureSystemMismatch", "cylinder measures need a Bernoulli or Markov model");
}

double wilson_half_width(long long hits, long long n) {
  if (n <= 0) return 1.0;
  const double z = 1.959963984540054;
  double p = static_cast<double>(hits) / static_cast<double>(n);
  double nn = static_cast<double>(n);
  double denom = 1.0 + z * z / nn;
  return z / denom * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
}

}  // namespace pdyn
