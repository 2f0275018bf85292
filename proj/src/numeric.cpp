#include "salami/numeric.hpp"

#include <cctype>
#include <cstdlib>

namespace salami {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::AsymmetricWeight: return "AsymmetricWeight";
    case ErrorCode::NonpositiveMeasure: return "NonpositiveMeasure";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SelfLoopWeight: return "SelfLoopWeight";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::MissingLength: return "MissingLength";
    case ErrorCode::DisconnectedQuery: return "DisconnectedQuery";
    case ErrorCode::SupportTouchesBoundary: return "SupportTouchesBoundary";
    case ErrorCode::KTouchesBoundary: return "KTouchesBoundary";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::BallTouchesBoundary: return "BallTouchesBoundary";
    case ErrorCode::NotAdjacentMetric: return "NotAdjacentMetric";
    case ErrorCode::InfeasibleMarginals: return "InfeasibleMarginals";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::NotLatticeLike: return "NotLatticeLike";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::NotLipschitz: return "NotLipschitz";
    case ErrorCode::UnreliableDistance: return "UnreliableDistance";
    case ErrorCode::NotLipschitzOnK: return "NotLipschitzOnK";
    case ErrorCode::WindowBufferTooSmall: return "WindowBufferTooSmall";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::WeightBelowEpsilon: return "WeightBelowEpsilon";
    case ErrorCode::NoJumpEdges: return "NoJumpEdges";
    case ErrorCode::NotBoundedGeometry: return "NotBoundedGeometry";
    case ErrorCode::NonpositiveHarmonic: return "NonpositiveHarmonic";
    case ErrorCode::DegenerateTestFunction: return "DegenerateTestFunction";
    case ErrorCode::NormalizationFailed: return "NormalizationFailed";
    case ErrorCode::NotInH0: return "NotInH0";
    case ErrorCode::BandTouchesBoundary: return "BandTouchesBoundary";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownLemmaId: return "UnknownLemmaId";
  }
  return "Unknown";
}

Rat rat_from_double(double v) {
  if (!std::isfinite(v)) fail(ErrorCode::ParseError, "non-finite number");
  if (v == 0.0) return Rat(0);
  int exp = 0;
  double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  for (int i = 0; i < 53 && mant != std::floor(mant); ++i) {
    mant *= 2.0;
    --exp;
  }
  BigInt num(static_cast<long long>(mant));
  Rat r(num);
  if (exp > 0) {
    r *= Rat(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rat(BigInt(1) << (-exp));
  }
  return r;
}

Rat rat_from_string(const std::string& s) {
  if (s.empty()) fail(ErrorCode::ParseError, "empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + s + "'");
      return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(BigInt(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") fail(ErrorCode::ParseError, "bad literal '" + s + "'");
    BigInt num(digits);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad rational literal '" + s + "'");
  }
}

std::string rat_to_string(const Rat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rat rat_approximate(double v, std::uint64_t max_den) {
  Rat target = rat_from_double(v);
  BigInt bound(max_den);
  if (bound < 1) bound = 1;
  if (denominator(target) <= bound) return target;
  // Continued-fraction convergents; when the next denominator overshoots the
  // bound, the best approximation is the last convergent or a semiconvergent.
  BigInt n = numerator(target), d = denominator(target);
  BigInt h0 = 0, k0 = 1, h1 = 1, k1 = 0;
  while (d != 0) {
    BigInt a = (n >= 0) ? BigInt(n / d) : BigInt(-(((-n) + d - 1) / d));  // floor
    BigInt h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > bound) {
      BigInt t = (bound - k0) / k1;
      Rat semi(h0 + t * h1, k0 + t * k1);
      Rat conv(h1, k1);
      return rat_abs(target - semi) < rat_abs(target - conv) ? semi : conv;
    }
    h0 = h1;
    k0 = k1;
    h1 = h2;
    k1 = k2;
    BigInt r = n - a * d;
    n = d;
    d = r;
  }
  return Rat(h1, k1);
}

}  // namespace salami
