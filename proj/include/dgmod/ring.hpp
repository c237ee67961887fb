#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace dgmod {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct DgmodError : std::runtime_error {
    explicit DgmodError(const std::string& msg) : std::runtime_error(msg) {}
};
struct UnsupportedRing : DgmodError {
    explicit UnsupportedRing(const std::string& msg) : DgmodError(msg) {}
};
struct ShapeError : DgmodError {
    explicit ShapeError(const std::string& msg) : DgmodError(msg) {}
};
struct RingMismatch : DgmodError {
    explicit RingMismatch(const std::string& msg) : DgmodError(msg) {}
};
struct NotASubmodule : DgmodError {
    explicit NotASubmodule(const std::string& msg) : DgmodError(msg) {}
};
struct AlgebraMismatch : DgmodError {
    explicit AlgebraMismatch(const std::string& msg) : DgmodError(msg) {}
};
struct PreconditionFailed : DgmodError {
    explicit PreconditionFailed(const std::string& msg) : DgmodError(msg) {}
};
struct WindowTooSmall : DgmodError {
    explicit WindowTooSmall(const std::string& msg) : DgmodError(msg) {}
};
struct SchemaError : DgmodError {
    explicit SchemaError(const std::string& msg) : DgmodError(msg) {}
};
struct NoCup1 : DgmodError {
    explicit NoCup1(const std::string& msg) : DgmodError(msg) {}
};
struct SignDerivationFailed : DgmodError {
    explicit SignDerivationFailed(const std::string& msg) : DgmodError(msg) {}
};

enum class RingKind { Integers, IntegersMod, PrimeField, Rationals };

/**
 * Coefficient ring of the engine: Z, Z/n (n >= 2), F_p (p prime), or Q.
 * All arithmetic is exact; elements are kept in canonical form
 * (representatives 0..n-1 mod n, lowest terms over Q).
 */
struct RingSpec {
    RingKind kind = RingKind::Integers;
    Int modulus = 0;  // n for IntegersMod, p for PrimeField, else unused

    static RingSpec Z() { return RingSpec{RingKind::Integers, 0}; }
    static RingSpec Zmod(const Int& n) {
        if (n < 2) throw UnsupportedRing("Zmod modulus must be >= 2");
        return RingSpec{RingKind::IntegersMod, n};
    }
    static RingSpec Fp(const Int& p) {
        if (p < 2 || !is_prime_small(p)) throw UnsupportedRing("Fp requires a prime");
        return RingSpec{RingKind::PrimeField, p};
    }
    static RingSpec Q() { return RingSpec{RingKind::Rationals, 0}; }

    bool operator==(const RingSpec& o) const { return kind == o.kind && modulus == o.modulus; }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    bool is_field() const { return kind == RingKind::PrimeField || kind == RingKind::Rationals; }
    bool is_modular() const { return kind == RingKind::IntegersMod || kind == RingKind::PrimeField; }
    bool is_finite() const { return is_modular(); }

    static bool is_prime_small(const Int& p) {
        if (p < 2) return false;
        for (Int d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

    Rat canon(const Rat& x) const {
        switch (kind) {
            case RingKind::Rationals:
                return x;  // cpp_rational is already in lowest terms
            case RingKind::Integers: {
                if (boost::multiprecision::denominator(x) != 1)
                    throw UnsupportedRing("non-integer value over Z");
                return x;
            }
            default: {
                if (boost::multiprecision::denominator(x) != 1)
                    throw UnsupportedRing("non-integer value over Z/n");
                Int v = boost::multiprecision::numerator(x) % modulus;
                if (v < 0) v += modulus;
                return Rat(v);
            }
        }
    }

    Rat add(const Rat& a, const Rat& b) const { return canon(a + b); }
    Rat sub(const Rat& a, const Rat& b) const { return canon(a - b); }
    Rat mul(const Rat& a, const Rat& b) const { return canon(a * b); }
    Rat neg(const Rat& a) const { return canon(-a); }

    bool is_zero(const Rat& a) const { return canon(a) == 0; }

    bool is_unit(const Rat& a) const {
        Rat c = canon(a);
        switch (kind) {
            case RingKind::Rationals: return c != 0;
            case RingKind::Integers: return c == 1 || c == -1;
            case RingKind::PrimeField: return c != 0;
            case RingKind::IntegersMod:
                return boost::multiprecision::gcd(boost::multiprecision::numerator(c), modulus) == 1;
        }
        return false;
    }

    // Multiplicative inverse of a unit.
    Rat inv(const Rat& a) const {
        Rat c = canon(a);
        if (!is_unit(c)) throw DgmodError("inv of non-unit");
        switch (kind) {
            case RingKind::Rationals: return Rat(1) / c;
            case RingKind::Integers: return c;  // 1 or -1
            default: {
                Int x, y;
                Int g = ext_gcd(boost::multiprecision::numerator(c), modulus, x, y);
                (void)g;
                return canon(Rat(x));
            }
        }
    }

    static Int ext_gcd(Int a, Int b, Int& x, Int& y) {
        if (b == 0) { x = (a >= 0) ? 1 : -1; y = 0; return a >= 0 ? a : -a; }
        Int x1, y1;
        Int g = ext_gcd(b, a % b, x1, y1);
        x = y1;
        y = x1 - (a / b) * y1;
        return g;
    }

    std::string to_string() const {
        switch (kind) {
            case RingKind::Integers: return "Z";
            case RingKind::IntegersMod: return "Z/" + modulus.str();
            case RingKind::PrimeField: return "F" + modulus.str();
            case RingKind::Rationals: return "Q";
        }
        return "?";
    }
};

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

}  // namespace dgmod
