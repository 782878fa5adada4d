#include "floation/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floation/error.hpp"

namespace flo {

namespace {

using Poly = RatVec;  // low -> high

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval(const Poly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int rsgn(const Rational& r) { return mpq_sgn(r.get_mpq_t()); }

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
    trim(d);
    return d;
}

// remainder of a / b
Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= q * b[k];
        trim(a);
    }
    return a;
}

int sign_changes(const std::vector<Poly>& seq, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& p : seq) {
        int s = rsgn(eval(p, x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

int count_roots(const Poly& p, const Rational& lo, const Rational& hi) {
    std::vector<Poly> seq{p, derivative(p)};
    while (!seq.back().empty()) {
        Poly r = poly_rem(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        seq.push_back(r);
    }
    return sign_changes(seq, lo) - sign_changes(seq, hi);
}

// Irreducibility certificate: irreducible modulo some small prime with the same degree.
bool irreducible_mod(const std::vector<long>& c, long p) {
    const std::size_t d = c.size() - 1;
    std::vector<long> f(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) f[k] = ((c[k] % p) + p) % p;
    if (f[d] == 0) return false;
    for (std::size_t k = 1; k <= d / 2; ++k) {
        long total = 1;
        for (std::size_t i = 0; i < k; ++i) total *= p;
        for (long code = 0; code < total; ++code) {
            std::vector<long> g(k + 1);
            long t = code;
            for (std::size_t i = 0; i < k; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[k] = 1;
            // remainder of f by monic g over GF(p)
            std::vector<long> r = f;
            for (std::size_t deg = d; deg >= k; --deg) {
                long q = r[deg] % p;
                if (q != 0)
                    for (std::size_t i = 0; i <= k; ++i) r[deg - k + i] = ((r[deg - k + i] - q * g[i]) % p + p) % p;
                if (deg == k) break;
            }
            bool zero = true;
            for (std::size_t i = 0; i < k; ++i) zero = zero && r[i] == 0;
            if (zero) return false;
        }
    }
    return true;
}

bool certify_irreducible(const Poly& p) {
    if (p.size() <= 2) return true;
    std::vector<long> c;
    for (const auto& q : p) {
        if (q.get_den() != 1 || !q.get_num().fits_slong_p()) return false;
        c.push_back(q.get_num().get_si());
    }
    for (long prime : {2L, 3L, 5L, 7L, 11L, 13L}) {
        if (irreducible_mod(c, prime)) return true;
    }
    return false;
}

struct Interval {
    Rational lo, hi;
};

Interval mul(const Interval& a, const Interval& b) {
    Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

}  // namespace

NumberField::NumberField(std::string name, RatVec coeffs, Rational lo, Rational hi, int precision_bits)
    : name_(std::move(name)), coeffs_(std::move(coeffs)), lo_(std::move(lo)), hi_(std::move(hi)),
      precision_bits_(precision_bits) {
    trim(coeffs_);
    if (coeffs_.size() < 2 || coeffs_.back() != 1)
        throw Error(ErrorCode::Invalid, "BadField", "defining polynomial must be monic of degree >= 1");
    if (!(lo_ < hi_)) throw Error(ErrorCode::Invalid, "BadField", "isolating interval must satisfy lo < hi");
    if (!certify_irreducible(coeffs_))
        throw Error(ErrorCode::Invalid, "BadField", "could not certify irreducibility of the defining polynomial");
    if (eval(coeffs_, lo_) == 0 || eval(coeffs_, hi_) == 0)
        throw Error(ErrorCode::Invalid, "BadField", "interval endpoint is a root");
    if (count_roots(coeffs_, lo_, hi_) != 1)
        throw Error(ErrorCode::Invalid, "BadField", "interval does not isolate exactly one root");
    if (degree() == 1) {
        lo_ = hi_ = -coeffs_[0];
    } else {
        const int s_lo = rsgn(eval(coeffs_, lo_));
        Rational width_target(1);
        width_target /= mpz_class(1) << 64;
        while (hi_ - lo_ > width_target) {
            Rational mid = (lo_ + hi_) / 2;
            if (rsgn(eval(coeffs_, mid)) == s_lo)
                lo_ = mid;
            else
                hi_ = mid;
        }
    }
    root_ = Rational((lo_ + hi_) / 2).get_d();
}

std::shared_ptr<const NumberField> NumberField::rationals() {
    static const auto f = std::make_shared<const NumberField>("Q", RatVec{0, 1}, Rational(-1), Rational(1));
    return f;
}

std::shared_ptr<const NumberField> NumberField::sqrt2() {
    static const auto f = std::make_shared<const NumberField>("sqrt2", RatVec{-2, 0, 1}, Rational(1), Rational(2));
    return f;
}

std::shared_ptr<const NumberField> NumberField::lambda6() {
    static const auto f =
        std::make_shared<const NumberField>("lambda6", RatVec{-1, -1, 0, 0, 0, 0, 1}, Rational(1), Rational(2));
    return f;
}

double NumberField::approx(const RatVec& coords) const {
    double acc = 0;
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) acc = acc * root_ + it->get_d();
    return acc;
}

int NumberField::sign(const RatVec& coords) const {
    bool all_zero = true;
    for (const auto& c : coords) all_zero = all_zero && c == 0;
    if (all_zero) return 0;
    if (degree() == 1) return rsgn(eval(coords, lo_));

    // floating filter
    {
        double value = 0, bound = 0, power = 1;
        const double r = std::fabs(root_);
        for (std::size_t k = 0; k < coords.size(); ++k) {
            double c = coords[k].get_d();
            value += c * power;
            bound += std::fabs(c) * power * (4.0 * static_cast<double>(k + 2)) * 1.2e-16;
            bound += std::fabs(c) * static_cast<double>(k) * (power / std::max(r, 1.0)) * 1e-18;
            power *= root_;
        }
        bound *= 8;
        if (std::isfinite(value) && std::isfinite(bound) && std::fabs(value) > bound) return value > 0 ? 1 : -1;
    }

    Rational lo = lo_, hi = hi_;
    const int s_lo = rsgn(eval(coeffs_, lo));
    for (int iter = 0; iter <= precision_bits_; ++iter) {
        Interval acc{coords.back(), coords.back()};
        Interval x{lo, hi};
        for (std::size_t k = coords.size() - 1; k-- > 0;) {
            acc = mul(acc, x);
            acc.lo += coords[k];
            acc.hi += coords[k];
        }
        if (acc.lo > 0) return 1;
        if (acc.hi < 0) return -1;
        Rational mid = (lo + hi) / 2;
        if (rsgn(eval(coeffs_, mid)) == s_lo)
            lo = mid;
        else
            hi = mid;
    }
    throw Error(ErrorCode::Order, "PrecisionExhausted",
                "sign not determined within " + std::to_string(precision_bits_) + " refinement bits");
}

RatVec NumberField::multiply(const RatVec& a, const RatVec& b) const {
    const std::size_t d = degree();
    RatVec prod(2 * d, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
    for (std::size_t k = prod.size(); k-- > d;) {
        if (prod[k] == 0) continue;
        Rational q = prod[k];
        for (std::size_t i = 0; i <= d; ++i) prod[k - d + i] -= q * coeffs_[i];
    }
    prod.resize(d);
    return prod;
}

AlgebraicNumber::AlgebraicNumber(FieldPtr f) : field_(std::move(f)), coords_(field_->degree(), Rational(0)) {}

AlgebraicNumber::AlgebraicNumber(FieldPtr f, RatVec coords) : field_(std::move(f)), coords_(std::move(coords)) {
    if (coords_.size() > field_->degree())
        throw Error(ErrorCode::Invalid, "BadFieldElement", "more power-basis coordinates than the field degree");
    coords_.resize(field_->degree(), Rational(0));
}

AlgebraicNumber::AlgebraicNumber(FieldPtr f, const Rational& r) : AlgebraicNumber(std::move(f)) { coords_[0] = r; }

bool AlgebraicNumber::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

bool AlgebraicNumber::is_rational() const {
    return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& c) { return c == 0; });
}

int AlgebraicNumber::sign() const { return field_->sign(coords_); }
double AlgebraicNumber::to_double() const { return field_->approx(coords_); }

std::string AlgebraicNumber::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < coords_.size(); ++k) {
        if (coords_[k] == 0) continue;
        if (!first) out << " + ";
        out << coords_[k].get_str();
        if (k == 1) out << "*t";
        if (k > 1) out << "*t^" << k;
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

void AlgebraicNumber::check_same(const AlgebraicNumber& o) const {
    if (field_ != o.field_) throw Error(ErrorCode::Order, "FieldMismatch", "operands live in different fields");
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    AlgebraicNumber out = *this;
    for (auto& c : out.coords_) c = -c;
    return out;
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
    check_same(o);
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += o.coords_[k];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) {
    check_same(o);
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= o.coords_[k];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator*=(const Rational& r) {
    for (auto& c : coords_) c *= r;
    return *this;
}

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    a.check_same(b);
    return AlgebraicNumber(a.field_, a.field_->multiply(a.coords_, b.coords_));
}

int compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    a.check_same(b);
    RatVec d(a.coords_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.coords_[k] - b.coords_[k];
    return a.field_->sign(d);
}

AlgebraicNumber dot(const std::vector<AlgebraicNumber>& coeffs, const std::vector<std::int64_t>& v) {
    if (coeffs.size() != v.size())
        throw Error(ErrorCode::Order, "RankMismatch",
                    "functional of length " + std::to_string(coeffs.size()) + " applied to vector of length " +
                        std::to_string(v.size()));
    AlgebraicNumber out(coeffs.at(0).field());
    RatVec acc(out.coords().size(), Rational(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        const auto& c = coeffs[i].coords();
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += c[k] * static_cast<long>(v[i]);
    }
    return AlgebraicNumber(out.field(), std::move(acc));
}

Rational parse_rational(const std::string& text) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
    if (t.empty()) throw Error(ErrorCode::Parse, "BadRational", "empty rational");
    auto dot_pos = t.find('.');
    try {
        if (dot_pos != std::string::npos) {
            bool neg = t[0] == '-';
            std::string digits = t.substr(neg ? 1 : 0);
            dot_pos = digits.find('.');
            std::string ip = digits.substr(0, dot_pos), fp = digits.substr(dot_pos + 1);
            if (ip.empty()) ip = "0";
            mpz_class num(ip + fp, 10), den = 1;
            for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
            Rational r(num, den);
            r.canonicalize();
            return neg ? Rational(-r) : r;
        }
        Rational r(t, 10);
        r.canonicalize();
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator");
        return r;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::Parse, "BadRational", "cannot parse rational '" + text + "'");
    }
}

}  // namespace flo
