#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace flo {

using Rational = mpq_class;
using RatVec = std::vector<Rational>;

/// Q(theta) for a real root theta of a monic irreducible polynomial, given with a
/// rational isolating interval. Elements are coordinate vectors in the power basis.
class NumberField {
public:
    /// coeffs low -> high, monic. Validates irreducibility (via a mod-p certificate)
    /// and that [lo, hi] isolates exactly one real root (Sturm count).
    NumberField(std::string name, RatVec coeffs, Rational lo, Rational hi, int precision_bits = 2048);

    static std::shared_ptr<const NumberField> rationals();
    static std::shared_ptr<const NumberField> sqrt2();
    /// x^6 - x - 1, real root in (1, 2).
    static std::shared_ptr<const NumberField> lambda6();

    const std::string& name() const { return name_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const RatVec& coefficients() const { return coeffs_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    double root_approx() const { return root_; }
    int precision_bits() const { return precision_bits_; }

    /// Sign of sum coords[k] theta^k; exact.
    int sign(const RatVec& coords) const;
    double approx(const RatVec& coords) const;
    RatVec multiply(const RatVec& a, const RatVec& b) const;

private:
    std::string name_;
    RatVec coeffs_;
    Rational lo_, hi_;  // refined isolating interval
    double root_ = 0;
    int precision_bits_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

/// Exact element of a NumberField.
class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    explicit AlgebraicNumber(FieldPtr f);  // zero
    AlgebraicNumber(FieldPtr f, RatVec coords);
    AlgebraicNumber(FieldPtr f, const Rational& r);

    const FieldPtr& field() const { return field_; }
    const RatVec& coords() const { return coords_; }
    bool is_zero() const;
    bool is_rational() const;
    int sign() const;
    double to_double() const;
    std::string to_string() const;  // "c0 + c1*t + ..." in the power basis

    AlgebraicNumber operator-() const;
    AlgebraicNumber& operator+=(const AlgebraicNumber& o);
    AlgebraicNumber& operator-=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const Rational& r);
    friend AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
    friend AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
    friend AlgebraicNumber operator*(AlgebraicNumber a, const Rational& r) { return a *= r; }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);

    /// Exact three-way comparison (same field required).
    friend int compare(const AlgebraicNumber& a, const AlgebraicNumber& b);
    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) == 0; }
    friend bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) < 0; }

private:
    void check_same(const AlgebraicNumber& o) const;
    FieldPtr field_;
    RatVec coords_;
};

/// Integer sum  sum_i v[i] * coeffs[i]  as a field element.
AlgebraicNumber dot(const std::vector<AlgebraicNumber>& coeffs, const std::vector<std::int64_t>& v);

Rational parse_rational(const std::string& text);

/// num/den in canonical form (mpq_class(num, den) is not canonicalized).
inline Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace flo
