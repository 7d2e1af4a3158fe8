#include "pdx/rational.hpp"

#include <climits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pdx {

namespace {

constexpr std::int64_t kMin = INT64_MIN;

std::uint64_t uabs(std::int64_t v) {
    return v < 0 ? std::uint64_t(0) - std::uint64_t(v) : std::uint64_t(v);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(std::gcd(uabs(a), uabs(b)));
}

mpz_class to_mpz(std::int64_t v) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
    return z;
}

bool small_add(std::int64_t an, std::int64_t ad, std::int64_t bn, std::int64_t bd,
               std::int64_t& rn, std::int64_t& rd) {
    if (ad == 1 && bd == 1) {
        if (__builtin_add_overflow(an, bn, &rn) || rn == kMin) return false;
        rd = 1;
        return true;
    }
    std::int64_t g = gcd64(ad, bd);
    std::int64_t adg = ad / g, bdg = bd / g;
    std::int64_t t1, t2, num, den;
    if (__builtin_mul_overflow(an, bdg, &t1) || __builtin_mul_overflow(bn, adg, &t2) ||
        __builtin_add_overflow(t1, t2, &num) || __builtin_mul_overflow(ad, bdg, &den))
        return false;
    if (num == 0) {
        rn = 0;
        rd = 1;
        return true;
    }
    if (num == kMin) return false;
    std::int64_t h = gcd64(num, den);
    rn = num / h;
    rd = den / h;
    return true;
}

bool small_mul(std::int64_t an, std::int64_t ad, std::int64_t bn, std::int64_t bd,
               std::int64_t& rn, std::int64_t& rd) {
    if (an == 0 || bn == 0) {
        rn = 0;
        rd = 1;
        return true;
    }
    if (ad == 1 && bd == 1) {
        if (__builtin_mul_overflow(an, bn, &rn) || rn == kMin) return false;
        rd = 1;
        return true;
    }
    std::int64_t g1 = bd == 1 ? 1 : gcd64(an, bd), g2 = ad == 1 ? 1 : gcd64(bn, ad);
    std::int64_t num, den;
    if (__builtin_mul_overflow(an / g1, bn / g2, &num) ||
        __builtin_mul_overflow(ad / g2, bd / g1, &den) || num == kMin)
        return false;
    rn = num;
    rd = den;
    return true;
}

}  // namespace

Rational::Rational(long long v) {
    if (v == kMin)
        assign_mpq(mpq_class(to_mpz(v)));
    else
        n_ = v;
}

Rational::Rational(long long num, long long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (num == kMin || den == kMin) {
        mpq_class q(to_mpz(num), to_mpz(den));
        q.canonicalize();
        assign_mpq(std::move(q));
        return;
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = num == 0 ? den : gcd64(num, den);
    n_ = num / g;
    d_ = den / g;
}

Rational::Rational(const mpq_class& q) {
    mpq_class c(q);
    c.canonicalize();
    assign_mpq(std::move(c));
}

void Rational::assign_mpq(mpq_class q) {
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (mpz_fits_slong_p(num.get_mpz_t()) && mpz_fits_slong_p(den.get_mpz_t())) {
        long nn = num.get_si();
        if (nn != LONG_MIN) {
            n_ = nn;
            d_ = den.get_si();
            big_.reset();
            return;
        }
    }
    n_ = 0;
    d_ = 1;
    big_ = std::make_unique<mpq_class>(std::move(q));
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(to_mpz(n_), to_mpz(d_));
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz(n_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz(d_); }

Rational Rational::parse(std::string_view s) {
    std::string text(s);
    auto trim = [](std::string& t) {
        std::size_t a = t.find_first_not_of(" \t");
        std::size_t b = t.find_last_not_of(" \t");
        t = a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    };
    trim(text);
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string num = text, den = "1";
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        trim(num);
        trim(den);
    }
    auto valid = [](const std::string& t) {
        std::size_t i = (t.size() > 0 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    if (!valid(num) || !valid(den)) throw std::invalid_argument("malformed rational literal '" + text + "'");
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    mpz_class zn(num, 10), zd(den, 10);
    if (zd == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    mpq_class q(zn, zd);
    q.canonicalize();
    Rational r;
    r.assign_mpq(std::move(q));
    return r;
}

std::string Rational::str() const {
    if (big_) return big_->get_str();
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(n_) / static_cast<double>(d_);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }

int Rational::sign() const {
    if (big_) return sgn(*big_);
    return (n_ > 0) - (n_ < 0);
}

Rational Rational::operator-() const {
    Rational r;
    if (big_)
        r.assign_mpq(-*big_);
    else {
        r.n_ = -n_;
        r.d_ = d_;
    }
    return r;
}

Rational& Rational::operator+=(const Rational& b) {
    if (!big_ && !b.big_) {
        std::int64_t rn, rd;
        if (small_add(n_, d_, b.n_, b.d_, rn, rd)) {
            n_ = rn;
            d_ = rd;
            return *this;
        }
    }
    assign_mpq(to_mpq() + b.to_mpq());
    return *this;
}

Rational& Rational::operator-=(const Rational& b) {
    if (!big_ && !b.big_) {
        std::int64_t rn, rd;
        if (small_add(n_, d_, -b.n_, b.d_, rn, rd)) {
            n_ = rn;
            d_ = rd;
            return *this;
        }
    }
    assign_mpq(to_mpq() - b.to_mpq());
    return *this;
}

Rational& Rational::operator*=(const Rational& b) {
    if (!big_ && !b.big_) {
        std::int64_t rn, rd;
        if (small_mul(n_, d_, b.n_, b.d_, rn, rd)) {
            n_ = rn;
            d_ = rd;
            return *this;
        }
    }
    mpq_class q = to_mpq() * b.to_mpq();
    assign_mpq(std::move(q));
    return *this;
}

Rational& Rational::operator/=(const Rational& b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    if (!big_ && !b.big_) {
        std::int64_t bn = b.d_, bd = b.n_;
        if (bd < 0) {
            bn = -bn;
            bd = -bd;
        }
        std::int64_t rn, rd;
        if (small_mul(n_, d_, bn, bd, rn, rd)) {
            n_ = rn;
            d_ = rd;
            return *this;
        }
    }
    mpq_class q = to_mpq() / b.to_mpq();
    assign_mpq(std::move(q));
    return *this;
}

void Rational::submul(const Rational& b, const Rational& c) {
    if (b.is_zero() || c.is_zero()) return;
    if (!big_ && !b.big_ && !c.big_) {
        std::int64_t pn, pd, rn, rd;
        if (small_mul(b.n_, b.d_, c.n_, c.d_, pn, pd) && small_add(n_, d_, -pn, pd, rn, rd)) {
            n_ = rn;
            d_ = rd;
            return;
        }
    }
    assign_mpq(to_mpq() - b.to_mpq() * c.to_mpq());
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
}

bool operator<(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        __int128 l = static_cast<__int128>(a.n_) * b.d_;
        __int128 r = static_cast<__int128>(b.n_) * a.d_;
        return l < r;
    }
    return a.to_mpq() < b.to_mpq();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace pdx
