#include "loadmatch/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "loadmatch/error.hpp"

namespace loadmatch {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kNonPositiveT: return "NonPositiveT";
    case ErrorCode::kBadOrder: return "BadOrder";
    case ErrorCode::kNonPositive: return "NonPositive";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kSOutOfRange: return "SOutOfRange";
    case ErrorCode::kDegenerateS: return "DegenerateS";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kNestingViolation: return "NestingViolation";
    case ErrorCode::kUniverseMismatch: return "UniverseMismatch";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kCycleEnumerationBudget: return "CycleEnumerationBudget";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kMax || num < -kMax || den > kMax) {
    throw Error(ErrorCode::kOverflow, "rational exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational Rational::reciprocal() const {
  if (num_ == 0) throw Error(ErrorCode::kInvalidArgument, "reciprocal of zero");
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::kInvalidArgument, "division by zero");
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::string Rational::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw Error(ErrorCode::kParse, "empty integer in rational '" + std::string(text) + "'");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw Error(ErrorCode::kParse, "bad rational '" + std::string(text) + "'");
    __int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw Error(ErrorCode::kParse, "bad rational '" + std::string(text) + "'");
      v = v * 10 + (s[i] - '0');
      if (v > kMax) throw Error(ErrorCode::kOverflow, "rational literal too large");
    }
    return static_cast<std::int64_t>(neg ? -v : v);
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational Rational::snap(double x, std::int64_t den) {
  if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "cannot snap non-finite value");
  const double scaled = std::round(x * static_cast<double>(den));
  if (std::fabs(scaled) > 9.0e18) throw Error(ErrorCode::kOverflow, "snapped value too large");
  return Rational(static_cast<std::int64_t>(scaled), den);
}

bool Rational::simplest_within(double x, double tol, std::int64_t max_den, Rational& out) {
  const double lo = x - tol;
  const double hi = x + tol;
  if (!(lo <= hi) || !std::isfinite(x)) return false;
  const double fl = std::floor(lo);
  if (std::ceil(lo) <= hi) {
    // An integer lies in the interval; pick the one of smallest magnitude.
    double pick = std::ceil(lo);
    if (pick < 0 && std::floor(hi) >= 0) pick = 0;
    else if (pick < 0) pick = std::floor(hi);
    out = Rational(static_cast<std::int64_t>(pick));
    return true;
  }
  // Walk the Stern-Brocot tree for the fractional part lo - fl, hi - fl in (0, 1).
  const double a = lo - fl;
  const double b = hi - fl;
  std::int64_t ln = 0, ld = 1, rn = 1, rd = 1;
  for (;;) {
    const std::int64_t mn = ln + rn;
    const std::int64_t md = ld + rd;
    if (md > max_den) return false;
    const double m = static_cast<double>(mn) / static_cast<double>(md);
    if (m < a) {
      // Gallop right: largest k with (ln + k rn) / (ld + k rd) < a.
      std::int64_t k = 1;
      while (ld + 2 * k * rd <= max_den &&
             static_cast<double>(ln + 2 * k * rn) / static_cast<double>(ld + 2 * k * rd) < a) {
        k *= 2;
      }
      std::int64_t lo_k = k, hi_k = 2 * k;
      while (hi_k - lo_k > 1) {
        const std::int64_t mid = (lo_k + hi_k) / 2;
        if (ld + mid * rd <= max_den &&
            static_cast<double>(ln + mid * rn) / static_cast<double>(ld + mid * rd) < a) {
          lo_k = mid;
        } else {
          hi_k = mid;
        }
      }
      ln += lo_k * rn;
      ld += lo_k * rd;
    } else if (m > b) {
      std::int64_t k = 1;
      while (rd + 2 * k * ld <= max_den &&
             static_cast<double>(rn + 2 * k * ln) / static_cast<double>(rd + 2 * k * ld) > b) {
        k *= 2;
      }
      std::int64_t lo_k = k, hi_k = 2 * k;
      while (hi_k - lo_k > 1) {
        const std::int64_t mid = (lo_k + hi_k) / 2;
        if (rd + mid * ld <= max_den &&
            static_cast<double>(rn + mid * ln) / static_cast<double>(rd + mid * ld) > b) {
          lo_k = mid;
        } else {
          hi_k = mid;
        }
      }
      rn += lo_k * ln;
      rd += lo_k * ld;
    } else {
      out = Rational(static_cast<std::int64_t>(fl) * md + mn, md);
      return true;
    }
  }
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace loadmatch
