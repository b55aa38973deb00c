#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tfuncert/exponent.hpp"

namespace tfuncert {

// Every exponent the inequalities and functionals refer to. Ranges are
// checked by the operation that consumes them, not here.
struct ExponentSet {
  int d = 1;
  Exponent p = 2.0;  // Lebesgue exponent on the time side
  Exponent q = 2.0;  // Lebesgue exponent on the frequency side
  double a = 1.0;    // time-side weight power
  double b = 1.0;    // frequency-side weight power
  Exponent r = 2.0;  // modulation inner exponent
  Exponent s = 2.0;  // modulation outer exponent
  double alpha = 0.0;
  double beta = 0.0;
  Exponent u = 2.0;  // ambiguity-bound exponents
  Exponent v = 2.0;

  [[nodiscard]] nlohmann::json to_json() const;
  static ExponentSet from_json(const nlohmann::json& j);
};

// p/(p-1) on [1, ∞] with 1 ↔ ∞.
Exponent holder_dual(Exponent p);

// sqrt(p^{1/p} / |p'|^{1/p'}) for p in (0, ∞]; 1 at p = 1 and p = ∞. For
// p < 1 the dual p' = p/(p-1) is negative and enters through |p'|.
double babenko_beckner(Exponent p);

// Square root of (p p'/r²)|r-2|^{2-r}|r-p|^{-1+r/p}|r-p'|^{-1+r/p'} with
// 0^0 = 1. Domain: r > 2 and r' <= p <= r, or 1 <= r < 2 and r <= p <= r',
// with p finite and greater than one.
double lieb_H(double r, double p);

// C_{r'}^d (C_{u/r'} C_{v/r'} / C_{s/r'})^{d/r'}. Requires 1 <= r, s <= 2,
// 0 < u, v <= r' and 1/u + 1/v = 1/s + 1/r' to 1e-12.
double sharp_B(Exponent r, Exponent s, Exponent u, Exponent v, int d = 1);

// A dual that may be infinite (when the base equals one).
struct GeneralizedDual {
  double value = 0.0;
  bool infinite = false;
  [[nodiscard]] double magnitude() const;  // |value|, +inf for the marker
};

struct LeindlerDuals {
  GeneralizedDual m;  // dual of u/r'
  GeneralizedDual n;  // dual of v/r'
};

// m' = u(r-1)/(ur-u-r) and n' likewise with v. A vanishing denominator
// yields the infinite marker.
LeindlerDuals leindler_duals(Exponent u, Exponent v, Exponent r);

// v = 1/(1/s + 1/r' - 1/u); DomainError when v leaves (0, r'].
Exponent solve_partner_exponent(Exponent s, Exponent r, Exponent u);

struct CowlingPriceWitness {
  bool holds = false;
  double margin_time = 0.0;       // a - (1/2 - 1/p)
  double margin_frequency = 0.0;  // b - (1/2 - 1/q)
  [[nodiscard]] nlohmann::json to_json() const;
};

// a > 1/2 - 1/p and b > 1/2 - 1/q, both strict. Requires p, q >= 1, a, b > 0.
CowlingPriceWitness check_cowling_price(Exponent p, Exponent q, double a, double b);

enum class ConditionStatus { holds, fails, precondition_violated };
std::string to_string(ConditionStatus s);

struct GalperinGrochenigReport {
  ConditionStatus status = ConditionStatus::fails;
  std::string reason;
  double left_time = 0.0;        // (a-α)/d + 1/p - 1/r
  double left_frequency = 0.0;   // (b-β)/d + 1/q - 1/s
  double right_time = 0.0;       // max{1/r - 1/q' + α/d, 1/r - 1/2 + α/d}
  double right_frequency = 0.0;  // max{1/s - 1/p' + β/d, 1/s - 1/2 + β/d}
  double left = 0.0;
  double right = 0.0;
  [[nodiscard]] bool holds() const { return status == ConditionStatus::holds; }
  [[nodiscard]] nlohmann::json to_json() const;
};

// Both left factors strictly positive and left > right. Structural range
// violations are reported as precondition_violated, not as a failure.
GalperinGrochenigReport check_galperin_grochenig(const ExponentSet& e);

// 1 <= r, s <= 2, 0 < u, v <= r' and the exponent relation to 1e-12.
bool check_lieb_domain(Exponent r, Exponent s, Exponent u, Exponent v);

}  // namespace tfuncert
