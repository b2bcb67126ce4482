#include "hhg/field.hpp"

#include <sstream>

namespace hhg {

namespace {
bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}
}  // namespace

FieldSpec FieldSpec::prime(std::int64_t p) {
  if (p >= (std::int64_t(1) << 31)) throw ParseError("prime modulus too large: " + std::to_string(p));
  if (!is_prime(p)) throw ParseError("modulus is not prime: " + std::to_string(p));
  return FieldSpec{Kind::Prime, p};
}

FieldSpec FieldSpec::parse(const std::string& text) {
  if (text == "Q") return rationals();
  if (text.rfind("Fp:", 0) == 0) {
    try {
      return prime(std::stoll(text.substr(3)));
    } catch (const std::invalid_argument&) {
      throw ParseError("bad field spec: " + text);
    } catch (const std::out_of_range&) {
      throw ParseError("bad field spec: " + text);
    }
  }
  throw ParseError("bad field spec (want Q or Fp:<p>): " + text);
}

std::string FieldSpec::str() const {
  return kind == Kind::Rationals ? "Q" : "Fp:" + std::to_string(p);
}

Scalar Scalar::from_int(const FieldSpec& f, std::int64_t v) {
  Scalar s(f);
  if (f.kind == FieldSpec::Kind::Rationals) {
    s.rat_ = v;
  } else {
    s.res_ = ((v % f.p) + f.p) % f.p;
  }
  return s;
}

Scalar Scalar::from_rational(const Rational& q) {
  Scalar s(FieldSpec::rationals());
  s.rat_ = q;
  return s;
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text) {
  if (text.empty()) throw ParseError("empty scalar");
  if (f.kind == FieldSpec::Kind::Prime) {
    try {
      return from_int(f, std::stoll(text));
    } catch (const std::exception&) {
      throw ParseError("bad prime-field scalar: " + text);
    }
  }
  auto slash = text.find('/');
  try {
    BigInt num(slash == std::string::npos ? text : text.substr(0, slash));
    BigInt den = slash == std::string::npos ? BigInt(1) : BigInt(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: " + text);
    return from_rational(Rational(num, den));
  } catch (const std::runtime_error& e) {
    throw ParseError("bad rational scalar '" + text + "': " + e.what());
  }
}

bool Scalar::is_zero() const {
  return field_.kind == FieldSpec::Kind::Rationals ? rat_ == 0 : res_ == 0;
}

bool Scalar::is_one() const {
  return field_.kind == FieldSpec::Kind::Rationals ? rat_ == 1 : res_ == 1;
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar r(field_);
  if (field_.kind == FieldSpec::Kind::Rationals)
    r.rat_ = rat_ + o.rat_;
  else
    r.res_ = (res_ + o.res_) % field_.p;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar r(field_);
  if (field_.kind == FieldSpec::Kind::Rationals)
    r.rat_ = rat_ * o.rat_;
  else
    r.res_ = (res_ * o.res_) % field_.p;  // p < 2^31 so the product fits in int64
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const {
  Scalar r(field_);
  if (field_.kind == FieldSpec::Kind::Rationals)
    r.rat_ = -rat_;
  else
    r.res_ = res_ == 0 ? 0 : field_.p - res_;
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (field_ != o.field_) return false;
  return field_.kind == FieldSpec::Kind::Rationals ? rat_ == o.rat_ : res_ == o.res_;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ShapeError("division by zero in " + field_.str());
  Scalar r(field_);
  if (field_.kind == FieldSpec::Kind::Rationals) {
    r.rat_ = 1 / rat_;
    return r;
  }
  // extended Euclid on (res_, p); gcd is 1 because p is prime and res_ != 0
  std::int64_t g = field_.p, a = res_, x = 0, x1 = 1;
  while (a != 0) {
    std::int64_t q = g / a;
    g -= q * a;
    std::swap(g, a);
    x -= q * x1;
    std::swap(x, x1);
  }
  r.res_ = ((x % field_.p) + field_.p) % field_.p;
  return r;
}

std::string Scalar::str() const {
  if (field_.kind == FieldSpec::Kind::Prime) return std::to_string(res_);
  std::ostringstream os;
  os << boost::multiprecision::numerator(rat_);
  if (boost::multiprecision::denominator(rat_) != 1) os << "/" << boost::multiprecision::denominator(rat_);
  return os.str();
}

}  // namespace hhg
