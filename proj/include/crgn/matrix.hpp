#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "crgn/field.hpp"

namespace crgn {

/// Dense matrix over a prime field. Immutable in spirit: every operation
/// returns a fresh matrix, entries are canonical residues stored row-major.
class Matrix {
  public:
    /// Zero matrix of the given (positive) dimensions.
    Matrix(const PrimeField& field, std::size_t rows, std::size_t cols);

    static Matrix identity(const PrimeField& field, std::size_t n);

    /// Builds a matrix from integer literals, reduced mod q. Every row must
    /// have the same length. Intended for golden test data and examples.
    static Matrix from_rows(const PrimeField& field, std::initializer_list<std::initializer_list<std::int64_t>> rows);
    static Matrix from_rows(const PrimeField& field, const std::vector<std::vector<std::int64_t>>& rows);

    static Matrix row_vector(const std::vector<Fp>& v);
    static Matrix column_vector(const std::vector<Fp>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    PrimeField field() const { return field_; }

    Fp at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Fp& x);

    std::vector<Fp> row(std::size_t r) const;
    std::vector<Fp> col(std::size_t c) const;
    void set_row(std::size_t r, const std::vector<Fp>& v);
    void set_col(std::size_t c, const std::vector<Fp>& v);

    /// Submatrix given by explicit row and column index selections (order kept).
    Matrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
    Matrix select_rows(std::span<const std::size_t> row_idx) const;
    Matrix select_cols(std::span<const std::size_t> col_idx) const;
    /// Contiguous block of `height` x `width` starting at (r0, c0).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t height, std::size_t width) const;

    bool is_zero() const;

    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Fp& s, const Matrix& a);

    // Raw residue access for tight loops within the library.
    std::uint32_t raw(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set_raw(std::size_t r, std::size_t c, std::uint32_t v) { a_[r * cols_ + c] = v; }

  private:
    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<std::uint32_t> a_;
};

std::ostream& operator<<(std::ostream& os, const Matrix& m);

Matrix transpose(const Matrix& m);

/// Row rank over F_q via Gaussian elimination (first nonzero pivot per column).
std::size_t rank(const Matrix& m);

bool is_nonsingular(const Matrix& m);

/// Inverse of a square matrix by Gauss-Jordan elimination.
/// Throws SingularMatrixError when rank is deficient.
Matrix inverse(const Matrix& m);

/// Solves A X = B for X (A square). Throws SingularMatrixError.
Matrix solve_left(const Matrix& a, const Matrix& b);
/// Solves X A = B for X (A square).
Matrix solve_right(const Matrix& a, const Matrix& b);

/// rows x |points| matrix with entry (r, i) = points[i]^r.
/// Points must be pairwise distinct (DuplicatePointError).
Matrix vandermonde(const PrimeField& field, std::size_t rows, const std::vector<Fp>& points);

/// |a| x |b| matrix with entry (i, j) = 1 / (a_i - b_j). All points of one
/// list distinct and the lists disjoint (CollidingPointsError).
Matrix cauchy(const PrimeField& field, const std::vector<Fp>& a_pts, const std::vector<Fp>& b_pts);

/// True iff every square submatrix (all sizes, all row/column selections) is
/// nonsingular, by exhaustive enumeration. Throws SizeCapError when
/// min(rows, cols) exceeds `cap`.
bool is_superregular(const Matrix& m, std::size_t cap = 8);

struct SubmatrixCheck {
    bool ok = false;
    bool exhaustive = true;
    std::uint64_t checked = 0;
};

struct MbcrConditionReport {
    SubmatrixCheck u_full;  // every d x d column selection of U nonsingular
    SubmatrixCheck v_full;  // every (d+t) x (d+t) column selection of V nonsingular
    SubmatrixCheck u_top;   // every k x k column selection of the top k rows of U
    SubmatrixCheck v_top;   // every k x k column selection of the top k rows of V

    bool all_ok() const { return u_full.ok && v_full.ok && u_top.ok && v_top.ok; }
};

struct SubsetScanOptions {
    std::uint64_t enumeration_cap = 100000; // enumerate when C(n, k) <= cap
    std::uint64_t samples = 1000;           // otherwise this many sampled subsets
    std::uint64_t seed = 20240907;
};

/// Verifies the four regularity conditions the minimum-bandwidth construction
/// places on its U (d x n) and V ((d+t) x n) matrices. Each condition is
/// checked exhaustively when the relevant binomial coefficient is within the
/// cap, otherwise on sampled column subsets; the report records which ran.
MbcrConditionReport check_mbcr_conditions(const Matrix& u, const Matrix& v, std::size_t k,
                                          const SubsetScanOptions& opts = {});

/// C(n, k), saturating at uint64 max.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Applies fn to every k-subset of {0, .., n-1} in lexicographic order while
/// fn returns true; returns false iff some call returned false.
bool for_each_combination(std::size_t n, std::size_t k, const std::function<bool(std::span<const std::size_t>)>& fn);

} // namespace crgn
