#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "glvkit/rational.hpp"

namespace glv {

// Dense row-major matrix of exact rationals. All the paper-sized matrices
// (A, B, lambda, M, K, C, D) are small, so no sparsity machinery.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RatMatrix identity(std::size_t n);
    static RatMatrix zero(std::size_t rows, std::size_t cols);
    static RatMatrix diagonal(const std::vector<Rational>& d);
    static RatMatrix column(const std::vector<Rational>& v);
    static RatMatrix row_vector(const std::vector<Rational>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMatrix& other) const = default;

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& rhs) const;
    RatMatrix operator+(const RatMatrix& rhs) const;
    RatMatrix operator-(const RatMatrix& rhs) const;
    RatMatrix operator-() const;
    RatMatrix scaled(const Rational& s) const;

    // Scale column j by s (right-multiplication by a diagonal unit).
    void scale_col(std::size_t j, const Rational& s);
    void scale_row(std::size_t i, const Rational& s);
    void swap_rows(std::size_t a, std::size_t b);

    std::vector<Rational> row(std::size_t i) const;
    std::vector<Rational> col(std::size_t j) const;
    std::vector<Rational> mul_vec(const std::vector<Rational>& v) const;

    // Block [r0, r1) x [c0, c1).
    RatMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;
    RatMatrix hstack(const RatMatrix& right) const;
    RatMatrix vstack(const RatMatrix& below) const;

    bool is_square() const { return rows_ == cols_; }
    bool is_zero() const;
    bool is_skew_symmetric() const;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Exact rank over the rationals.
std::size_t rank(const RatMatrix& m);

// Basis of {v : M v = 0}. Each vector is primitive integer: denominators
// cleared, entry gcd 1, first nonzero entry positive. Count = cols - rank.
std::vector<std::vector<Rational>> right_kernel_basis(const RatMatrix& m);

// Basis of {w : w M = 0}, same normalization (kernel of the transpose).
std::vector<std::vector<Rational>> left_kernel_basis(const RatMatrix& m);

// Exact inverse; throws SingularMatrix when det = 0.
RatMatrix invert(const RatMatrix& c);

// One exact solution of A x = b with free variables set to zero, or nullopt
// when the system is inconsistent.
std::optional<std::vector<Rational>> solve_linear(const RatMatrix& a, const std::vector<Rational>& b);

// Congruence canonicalization of a skew-symmetric K: returns (P, r) with
// P K P^T = S(r, n-r) exactly, where S is r/2 blocks [[0,1],[-1,0]] followed
// by zeros and r = rank(K). Pair-pivoting is lexicographic, so the result is
// deterministic. Throws NotSkewSymmetric.
std::pair<RatMatrix, std::size_t> skew_congruence_canonicalize(const RatMatrix& k);

// The canonical matrix S(r, n-r) itself.
RatMatrix skew_canonical_form(std::size_t r, std::size_t n);

// For an m x n matrix B of rank n, pick p identity columns (greedy, in index
// order) so that (B | B*) has rank n + p. Throws CannotComplete if n + p > m.
RatMatrix complete_to_full_rank(const RatMatrix& b, std::size_t p);

// Given k independent rows of width n, build an invertible n x n matrix with
// those rows at the bottom and greedily chosen identity rows on top.
RatMatrix complete_rows_to_invertible(const RatMatrix& bottom);

// Scale a rational vector to a primitive integer vector with positive leading
// entry. Zero vectors are returned unchanged.
std::vector<Rational> normalize_primitive(std::vector<Rational> v);

} // namespace glv
