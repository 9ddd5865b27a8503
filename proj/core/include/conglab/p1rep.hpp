#pragma once

#include <array>
#include <memory>
#include <unordered_map>
#include <vector>

#include "conglab/algebra.hpp"

namespace conglab::p1rep {

using u64 = algebra::u64;
using i64 = algebra::i64;

/// A point (c:d) of P^1(Z/M) in canonical normalized form.
struct P1Point {
    u64 c = 0, d = 0;
    bool operator==(const P1Point& o) const { return c == o.c && d == o.d; }
    bool operator<(const P1Point& o) const { return c != o.c ? c < o.c : d < o.d; }
};

/// Enumerated projective line with a total normalization: every unimodular
/// pair maps to exactly one canonical representative (computed prime power by
/// prime power through the Chinese remainder theorem), and two pairs
/// normalize equal iff they differ by a unit scalar.
class P1Space {
public:
    static std::shared_ptr<const P1Space> make(u64 M);

    u64 modulus() const { return M_; }
    size_t size() const { return points_.size(); }
    const std::vector<P1Point>& points() const { return points_; }

    /// Canonical representative of (c:d); requires gcd(c, d, M) = 1.
    P1Point normalize(i64 c, i64 d) const;
    std::uint32_t index_of(i64 c, i64 d) const;

private:
    u64 M_ = 1;
    algebra::Factorization factors_;
    std::vector<P1Point> points_; // sorted lexicographically
    std::unordered_map<u64, std::uint32_t> index_;
};

using Mat2 = std::array<i64, 4>; // row-major (a b; c d), acting on row vectors

inline Mat2 gen_S() { return {0, -1, 1, 0}; }
inline Mat2 gen_T() { return {1, 1, 0, 1}; }

/// Coefficient vector over F_{ell^d} indexed by the points of P^1(Z/M).
struct P1Vector {
    std::shared_ptr<const P1Space> space;
    std::shared_ptr<const algebra::FqContext> field;
    std::vector<u64> data; // flat, size() = space->size() * field->degree

    algebra::ExtElement coefficient(size_t point_index) const;
    bool is_zero() const;
    static P1Vector zero(std::shared_ptr<const P1Space> space, std::shared_ptr<const algebra::FqContext> field);
};

/// The vector with coefficient zeta^(-h beta) at (1:h); zeta of order M from
/// the cyclotomic construction.
P1Vector tm_vector(u64 M, i64 beta, u64 ell);
P1Vector tm_vector(std::shared_ptr<const P1Space> space, const algebra::CyclotomicField& F, i64 beta);

/// Row-vector action (c:d) -> normalize((c,d) g); g must be unimodular mod M.
P1Vector act(const P1Vector& v, const Mat2& g);

/// Least subspace containing the seeds, closed under the actions of S and T.
struct Submodule {
    std::shared_ptr<const P1Space> space;
    std::shared_ptr<const algebra::FqContext> field;
    std::vector<std::vector<u64>> rows;  // reduced echelon rows, flat Fq coefficients
    std::vector<std::uint32_t> pivots;   // strictly increasing point indices

    size_t dim() const { return rows.size(); }
};

Submodule generate_submodule(const std::vector<P1Vector>& seeds);

bool membership(const P1Vector& v, const Submodule& W);

/// Augmentation kernel of F{P^1(F_p)}: dimension p; contains the invariant
/// vector iff ell | p + 1.
Submodule steinberg_subspace(u64 p, u64 ell);
P1Vector invariant_vector(std::shared_ptr<const P1Space> space, std::shared_ptr<const algebra::FqContext> field);

/// Bijection data between P^1(Z/M) and the product of the P^1(Z/M_p).
struct CrtSplit {
    u64 M = 1;
    std::vector<u64> prime_powers;                           // M_p, ascending primes
    std::vector<std::shared_ptr<const P1Space>> local_spaces;
    std::vector<std::vector<std::uint32_t>> to_local;        // [factor][global index] -> local index
    /// Global index from a tuple of local indices.
    std::uint32_t from_local(const std::vector<std::uint32_t>& locals) const;
    std::shared_ptr<const P1Space> space;
};

CrtSplit crt_split(u64 M);

/// Inflation along reduction mod M' | M: each point of P^1(Z/M') maps to the
/// sum of its preimages in P^1(Z/M).
P1Vector lift_vector(const P1Vector& v, std::shared_ptr<const P1Space> target,
                     std::shared_ptr<const algebra::FqContext> target_field);

} // namespace conglab::p1rep
