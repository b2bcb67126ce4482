#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/* Designates the ground field: the rationals or a prime field F_p. */
struct FieldSpec {
  enum class Kind { Rationals, Prime };
  Kind kind = Kind::Rationals;
  std::int64_t p = 0;  // only meaningful for Kind::Prime

  static FieldSpec rationals() { return FieldSpec{Kind::Rationals, 0}; }
  static FieldSpec prime(std::int64_t p);
  /* "Q" or "Fp:<p>" (the CLI / document syntax). */
  static FieldSpec parse(const std::string& text);

  bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }
  std::string str() const;
};

/* A value in the field designated by a FieldSpec.  Rationals are kept in
 * lowest terms with positive denominator (cpp_rational's normal form);
 * prime-field values are residues in [0, p).  Mixing fields throws
 * FieldMismatch. */
class Scalar {
public:
  Scalar() : field_(FieldSpec::rationals()), rat_(0) {}
  explicit Scalar(const FieldSpec& f) : field_(f), rat_(0), res_(0) {}

  static Scalar zero(const FieldSpec& f) { return Scalar(f); }
  static Scalar one(const FieldSpec& f) { return from_int(f, 1); }
  static Scalar from_int(const FieldSpec& f, std::int64_t v);
  static Scalar from_rational(const Rational& q);  // field = Q
  /* Parses the canonical text form: "p/q" or "p" over Q, integer over F_p. */
  static Scalar parse(const FieldSpec& f, const std::string& text);

  const FieldSpec& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws on zero divisor
  Scalar operator-() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar inverse() const;

  /* Canonical text: lowest-terms "p" (q==1) or "p/q" with q>0 over Q;
   * decimal residue over F_p. */
  std::string str() const;

  const Rational& rational() const { return rat_; }
  std::int64_t residue() const { return res_; }

private:
  void check_same(const Scalar& o) const {
    if (field_ != o.field_) throw FieldMismatch("scalars over " + field_.str() + " and " + o.field_.str());
  }
  FieldSpec field_;
  Rational rat_;          // used over Q
  std::int64_t res_ = 0;  // used over F_p
};

}  // namespace hhg
