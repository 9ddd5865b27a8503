#pragma once

#include <vector>

#include "conglab/qseries.hpp"

namespace conglab::forms {

using qseries::IntSeries;
using qseries::ModSeries;
using u64 = algebra::u64;
using i64 = algebra::i64;

/// dim M_k(SL2(Z)); zero for negative or odd k.
int dim_mk(int k);

/// prod_{n>=1} (1 - q^n) on the integer grid, exact coefficients.
IntSeries pentagonal_series(i64 precision);
ModSeries pentagonal_series_mod(u64 modulus, i64 precision);

/// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
IntSeries eisenstein(int k, i64 precision);
ModSeries eisenstein_mod(int k, u64 ell, i64 precision);

/// eta^24 = q prod (1-q^n)^24, by repeated squaring of the pentagonal series.
IntSeries delta(i64 precision);
ModSeries delta_mod(u64 ell, i64 precision);

/// eta^r as a Puiseux series on the 1/24 grid; the window covers numerators
/// [r, precision_numer).  Negative powers go through the series inverse.
IntSeries eta_power(int r, i64 precision_numer);

/// p(0..n_max) modulo an arbitrary modulus >= 2, by the pentagonal recurrence.
std::vector<u64> partition_mod(u64 modulus, i64 n_max);

/// Exact partition numbers p(0..n_max).
std::vector<mpz_class> partition_exact(i64 n_max);

struct LevelOneBasis {
    int k = 0;
    u64 ell = 0;
    int dim = 0;
    i64 precision = 0;
    std::vector<ModSeries> basis;                 // reduced row echelon, pivots 0..dim-1
    std::vector<std::pair<int, int>> provenance;  // monomial exponents (a, b) for E4^a E6^b
};

/// Echelonized mod-ell basis of M_k(SL2(Z)) from the E4^a E6^b monomials.
/// Requires ell >= 5 and precision >= 2*dim.
LevelOneBasis level_one_basis(int k, u64 ell, i64 precision);

/// A set S of Fourier indices coprime to p, |S| = dim, whose coefficient
/// matrix over the basis is invertible mod ell; greedy left-to-right.
std::vector<i64> coefficient_full_rank_witness(const LevelOneBasis& basis, u64 p);

} // namespace conglab::forms
