#include "tfuncert/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tfuncert/errors.hpp"

namespace tfuncert {
namespace {

constexpr double kRelationTol = 1e-12;

nlohmann::json exponent_json(Exponent e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

Exponent exponent_from(const nlohmann::json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  return Exponent(j.get<double>());
}

// base^exp with the convention 0^0 = 1 for a base that vanishes to rounding.
double power_zero_convention(double base, double exp, double scale) {
  if (std::abs(base) <= 1e-14 * scale) return 1.0;
  return std::pow(std::abs(base), exp);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

nlohmann::json ExponentSet::to_json() const {
  return {{"d", d},
          {"p", exponent_json(p)},
          {"q", exponent_json(q)},
          {"a", a},
          {"b", b},
          {"r", exponent_json(r)},
          {"s", exponent_json(s)},
          {"alpha", alpha},
          {"beta", beta},
          {"u", exponent_json(u)},
          {"v", exponent_json(v)}};
}

ExponentSet ExponentSet::from_json(const nlohmann::json& j) {
  ExponentSet e;
  try {
    if (!j.is_object()) throw DomainError("exponent set must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "d") {
        e.d = value.get<int>();
      } else if (key == "p") {
        e.p = exponent_from(value);
      } else if (key == "q") {
        e.q = exponent_from(value);
      } else if (key == "a") {
        e.a = value.get<double>();
      } else if (key == "b") {
        e.b = value.get<double>();
      } else if (key == "r") {
        e.r = exponent_from(value);
      } else if (key == "s") {
        e.s = exponent_from(value);
      } else if (key == "alpha") {
        e.alpha = value.get<double>();
      } else if (key == "beta") {
        e.beta = value.get<double>();
      } else if (key == "u") {
        e.u = exponent_from(value);
      } else if (key == "v") {
        e.v = exponent_from(value);
      } else {
        throw DomainError("unknown exponent '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DomainError(std::string("malformed exponent set: ") + ex.what());
  }
  if (e.d != 1 && e.d != 2) throw DomainError("dimension must be 1 or 2");
  return e;
}

Exponent holder_dual(Exponent p) {
  if (p.is_infinite()) return 1.0;
  if (p.value() < 1.0) throw DomainError("Hölder dual needs p >= 1, got " + p.to_string());
  if (p.value() == 1.0) return Exponent::infinity();
  return p.value() / (p.value() - 1.0);
}

double babenko_beckner(Exponent p) {
  if (p.is_infinite() || p.value() == 1.0) return 1.0;
  const double x = p.value();
  const double dual = x / (x - 1.0);  // negative when x < 1
  return std::sqrt(std::pow(x, 1.0 / x) / std::pow(std::abs(dual), 1.0 / dual));
}

double lieb_H(double r, double p) {
  if (!(r >= 1.0) || !std::isfinite(r) || r == 2.0) {
    throw DomainError("H(r,p) needs r in [1,2) or r > 2, got r=" + fmt(r));
  }
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("H(r,p) needs 1 < p < inf, got p=" + fmt(p));
  }
  // r' <= p <= r (r > 2) or r <= p <= r' (r < 2), i.e. |1/p - 1/2| <= |1/r - 1/2|.
  if (std::abs(1.0 / p - 0.5) > std::abs(1.0 / r - 0.5) + kRelationTol) {
    throw DomainError("p=" + fmt(p) + " lies outside the admissible range for r=" + fmt(r));
  }
  const double pd = p / (p - 1.0);
  const double scale = std::max({r, p, pd});
  double h2 = p * pd / (r * r);
  h2 *= std::pow(std::abs(r - 2.0), 2.0 - r);
  h2 *= power_zero_convention(r - p, -1.0 + r / p, scale);
  h2 *= power_zero_convention(r - pd, -1.0 + r / pd, scale);
  return std::sqrt(h2);
}

double sharp_B(Exponent r, Exponent s, Exponent u, Exponent v, int d) {
  if (d != 1 && d != 2) throw DomainError("dimension must be 1 or 2");
  if (!check_lieb_domain(r, s, u, v)) {
    throw DomainError("B(r,s,u,v) outside its domain: need 1<=r,s<=2, 0<u,v<=r' and "
                      "1/u + 1/v = 1/s + 1/r'");
  }
  const Exponent rd = holder_dual(r);
  if (rd.is_infinite()) return 1.0;  // C_∞ = 1 and the outer power vanishes
  const double rv = rd.value();
  const double inner = babenko_beckner(u.value() / rv) * babenko_beckner(v.value() / rv) /
                       babenko_beckner(s.value() / rv);
  return std::pow(babenko_beckner(rd), d) * std::pow(inner, d / rv);
}

double GeneralizedDual::magnitude() const {
  return infinite ? std::numeric_limits<double>::infinity() : std::abs(value);
}

LeindlerDuals leindler_duals(Exponent u, Exponent v, Exponent r) {
  if (u.is_infinite() || v.is_infinite() || r.is_infinite()) {
    throw DomainError("Leindler duals need finite u, v, r");
  }
  auto dual = [&](double x) {
    const double rr = r.value();
    const double den = x * rr - x - rr;
    if (std::abs(den) <= kRelationTol * std::max(1.0, x * rr)) return GeneralizedDual{0.0, true};
    return GeneralizedDual{x * (rr - 1.0) / den, false};
  };
  return {dual(u.value()), dual(v.value())};
}

Exponent solve_partner_exponent(Exponent s, Exponent r, Exponent u) {
  const Exponent rd = holder_dual(r);
  const double den = s.reciprocal() + rd.reciprocal() - u.reciprocal();
  if (den <= 0.0) {
    throw DomainError("no partner exponent: 1/s + 1/r' - 1/u = " + fmt(den) + " is not positive");
  }
  const double v = 1.0 / den;
  if (rd.is_finite() && v > rd.value() * (1.0 + kRelationTol)) {
    throw DomainError("partner exponent v=" + fmt(v) + " exceeds the bound r'=" + rd.to_string());
  }
  return v;
}

nlohmann::json CowlingPriceWitness::to_json() const {
  return {{"holds", holds}, {"margin_time", margin_time}, {"margin_frequency", margin_frequency}};
}

CowlingPriceWitness check_cowling_price(Exponent p, Exponent q, double a, double b) {
  if ((p.is_finite() && p.value() < 1.0) || (q.is_finite() && q.value() < 1.0)) {
    throw DomainError("Cowling-Price needs p, q >= 1");
  }
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("Cowling-Price needs a, b > 0");
  CowlingPriceWitness w;
  // Same operation order as the Galperin-Gröchenig left factors, so the two
  // checkers round identically on their common domain.
  w.margin_time = (a + p.reciprocal()) - 0.5;
  w.margin_frequency = (b + q.reciprocal()) - 0.5;
  w.holds = w.margin_time > 0.0 && w.margin_frequency > 0.0;
  return w;
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::holds: return "holds";
    case ConditionStatus::fails: return "fails";
    case ConditionStatus::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

nlohmann::json GalperinGrochenigReport::to_json() const {
  return {{"status", to_string(status)},  {"reason", reason},
          {"left_time", left_time},       {"left_frequency", left_frequency},
          {"right_time", right_time},     {"right_frequency", right_frequency},
          {"left", left},                 {"right", right}};
}

GalperinGrochenigReport check_galperin_grochenig(const ExponentSet& e) {
  GalperinGrochenigReport rep;
  auto violated = [&](std::string why) {
    rep.status = ConditionStatus::precondition_violated;
    rep.reason = std::move(why);
    return rep;
  };
  if (e.d < 1) return violated("dimension must be positive");
  if (e.alpha < 0.0 || e.beta < 0.0) return violated("alpha and beta must be non-negative");
  if (e.r.is_infinite() || e.r.value() > 2.0 || e.s.is_infinite() || e.s.value() > 2.0) {
    return violated("r and s must lie in (0, 2]");
  }
  if ((e.p.is_finite() && e.p.value() < 1.0) || (e.q.is_finite() && e.q.value() < 1.0)) {
    return violated("p and q must lie in [1, inf]");
  }
  if (e.p.is_finite() && e.r.value() > e.p.value()) return violated("need r <= p");
  if (e.q.is_finite() && e.s.value() > e.q.value()) return violated("need s <= q");

  const double d = e.d;
  const double inv_p = e.p.reciprocal();
  const double inv_q = e.q.reciprocal();
  const double inv_r = e.r.reciprocal();
  const double inv_s = e.s.reciprocal();
  rep.left_time = ((e.a - e.alpha) / d + inv_p) - inv_r;
  rep.left_frequency = ((e.b - e.beta) / d + inv_q) - inv_s;
  rep.right_time = std::max(inv_r - (1.0 - inv_q) + e.alpha / d, inv_r - 0.5 + e.alpha / d);
  rep.right_frequency = std::max(inv_s - (1.0 - inv_p) + e.beta / d, inv_s - 0.5 + e.beta / d);
  rep.left = rep.left_time * rep.left_frequency;
  rep.right = rep.right_time * rep.right_frequency;

  if (!(rep.left_time > 0.0)) {
    rep.reason = "time-side left factor is not positive";
  } else if (!(rep.left_frequency > 0.0)) {
    rep.reason = "frequency-side left factor is not positive";
  } else if (!(rep.left > rep.right)) {
    rep.reason = "left product does not exceed the right product";
  } else {
    rep.status = ConditionStatus::holds;
    return rep;
  }
  rep.status = ConditionStatus::fails;
  return rep;
}

bool check_lieb_domain(Exponent r, Exponent s, Exponent u, Exponent v) {
  auto in_12 = [](Exponent x) { return x.is_finite() && x.value() >= 1.0 && x.value() <= 2.0; };
  if (!in_12(r) || !in_12(s)) return false;
  const Exponent rd = holder_dual(r);
  auto bounded = [&](Exponent x) {
    if (rd.is_infinite()) return true;
    return x.is_finite() && x.value() <= rd.value() * (1.0 + kRelationTol);
  };
  if (!bounded(u) || !bounded(v)) return false;
  const double lhs = u.reciprocal() + v.reciprocal();
  const double rhs = s.reciprocal() + rd.reciprocal();
  return std::abs(lhs - rhs) <= kRelationTol;
}

}  // namespace tfuncert
