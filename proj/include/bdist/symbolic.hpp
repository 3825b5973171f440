#ifndef BDIST_SYMBOLIC_HPP
#define BDIST_SYMBOLIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdist/chain.hpp"

// Fixed-N probabilities as exact-integer polynomials in the monomial family
// coef * r1^a (1-r1)^b r2^c (1-r2)^d. symbolic_pmf(n) returns one polynomial
// per i, each representing (r1+r2) * p_i, matching the small-N tables.

namespace bdist {

struct Monomial {
    long long coef;
    int a, b, c, d;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct SymbolicPoly {
    std::vector<Monomial> terms;  // canonical: lexicographic on (a,b,c,d), no zero coefs
};

namespace detail {

inline bool exps_less(const Monomial& x, const Monomial& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.c != y.c) return x.c < y.c;
    return x.d < y.d;
}

inline void merge_terms(std::vector<Monomial>& terms) {
    std::sort(terms.begin(), terms.end(), exps_less);
    std::vector<Monomial> out;
    for (const Monomial& t : terms) {
        if (!out.empty() && out.back().a == t.a && out.back().b == t.b &&
            out.back().c == t.c && out.back().d == t.d) {
            out.back().coef += t.coef;
        } else {
            out.push_back(t);
        }
    }
    std::erase_if(out, [](const Monomial& t) { return t.coef == 0; });
    terms = std::move(out);
}

// One pass of the collapse rule: equal-coefficient pairs with exponents
// (a+1,b,c,d) and (a,b+1,c,d) reduce to (a,b,c,d), since r1 + (1-r1) = 1;
// likewise in (c,d). Returns true if anything changed.
inline bool collapse_once(std::vector<Monomial>& terms) {
    for (std::size_t p = 0; p < terms.size(); ++p) {
        for (std::size_t q = 0; q < terms.size(); ++q) {
            if (p == q || terms[p].coef != terms[q].coef) continue;
            const Monomial& x = terms[p];
            const Monomial& y = terms[q];
            if (x.a == y.a + 1 && x.b + 1 == y.b && x.c == y.c && x.d == y.d) {
                terms[p] = Monomial{x.coef, y.a, x.b, x.c, x.d};
                terms.erase(terms.begin() + std::ptrdiff_t(q));
                return true;
            }
            if (x.c == y.c + 1 && x.d + 1 == y.d && x.a == y.a && x.b == y.b) {
                terms[p] = Monomial{x.coef, x.a, x.b, y.c, x.d};
                terms.erase(terms.begin() + std::ptrdiff_t(q));
                return true;
            }
        }
    }
    return false;
}

}  // namespace detail

inline SymbolicPoly simplify(SymbolicPoly poly) {
    detail::merge_terms(poly.terms);
    while (detail::collapse_once(poly.terms)) detail::merge_terms(poly.terms);
    return poly;
}

inline SymbolicPoly add(const SymbolicPoly& x, const SymbolicPoly& y) {
    SymbolicPoly out = x;
    out.terms.insert(out.terms.end(), y.terms.begin(), y.terms.end());
    return simplify(std::move(out));
}

// Multiply by one factor of the family: da/db/dc/dd are exponent increments.
inline SymbolicPoly scaled(const SymbolicPoly& poly, int da, int db, int dc, int dd) {
    SymbolicPoly out = poly;
    for (Monomial& t : out.terms) {
        t.a += da;
        t.b += db;
        t.c += dc;
        t.d += dd;
    }
    return out;
}

inline double eval_symbolic(const SymbolicPoly& poly, const ChainParams& chain) {
    double total = 0.0;
    for (const Monomial& t : poly.terms) {
        total += double(t.coef) * std::pow(chain.r1, t.a) * std::pow(1.0 - chain.r1, t.b) *
                 std::pow(chain.r2, t.c) * std::pow(1.0 - chain.r2, t.d);
    }
    return total;
}

inline std::string render(const SymbolicPoly& poly) {
    if (poly.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const Monomial& t : poly.terms) {
        const long long mag = t.coef < 0 ? -t.coef : t.coef;
        if (first) {
            if (t.coef < 0) out += "-";
            first = false;
        } else {
            out += t.coef < 0 ? " - " : " + ";
        }
        std::string factors;
        auto factor = [&](const std::string& base, int e) {
            if (e == 0) return;
            if (!factors.empty()) factors += "*";
            factors += base;
            if (e > 1) factors += "^" + std::to_string(e);
        };
        factor("r1", t.a);
        factor("(1-r1)", t.b);
        factor("r2", t.c);
        factor("(1-r2)", t.d);
        if (mag != 1 || factors.empty()) {
            out += std::to_string(mag);
            if (!factors.empty()) out += "*";
        }
        out += factors;
    }
    return out;
}

inline constexpr int kSymbolicCap = 12;

// Runs the possession recursion over monomial-weighted states for N fixed
// at n. Element i of the result represents (r1+r2) * p_i.
inline std::vector<SymbolicPoly> symbolic_pmf(int n) {
    if (n < 0 || n > kSymbolicCap)
        throw std::length_error("symbolic_pmf: n must lie in [0,12]");
    // (r1+r2)-scaled initial state: q1[0] = r2, q2[0] = r1
    std::vector<SymbolicPoly> q1{SymbolicPoly{{Monomial{1, 0, 0, 1, 0}}}};
    std::vector<SymbolicPoly> q2{SymbolicPoly{{Monomial{1, 1, 0, 0, 0}}}};
    for (int step = 1; step <= n; ++step) {
        q1.push_back(SymbolicPoly{});
        q2.push_back(SymbolicPoly{});
        for (int i = step; i >= 0; --i) {
            const SymbolicPoly prev1 = q1[std::size_t(i)];
            const SymbolicPoly prev2 = q2[std::size_t(i)];
            q2[std::size_t(i)] =
                i > 0 ? add(scaled(q1[std::size_t(i - 1)], 1, 0, 0, 0),
                            scaled(q2[std::size_t(i - 1)], 0, 0, 0, 1))
                      : SymbolicPoly{};
            q1[std::size_t(i)] = add(scaled(prev1, 0, 1, 0, 0), scaled(prev2, 0, 0, 1, 0));
        }
    }
    std::vector<SymbolicPoly> out;
    out.reserve(std::size_t(n) + 1);
    for (int i = 0; i <= n; ++i)
        out.push_back(simplify(add(q1[std::size_t(i)], q2[std::size_t(i)])));
    return out;
}

}  // namespace bdist

#endif  // BDIST_SYMBOLIC_HPP
