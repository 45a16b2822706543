#include "crgn/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace crgn {

namespace {

std::string dims(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_same_field(const Matrix& a, const Matrix& b) {
    if (a.field() != b.field()) {
        throw FieldMismatchError("matrices over F_" + std::to_string(a.field().modulus()) + " and F_" +
                                 std::to_string(b.field().modulus()));
    }
}

// In-place Gauss-Jordan on a rows x cols residue grid; reduces the leading
// `lead` columns and applies all row operations across the full width.
// Pivot choice: first row with a nonzero entry in the current column.
std::size_t gauss_jordan(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols, std::size_t lead,
                         std::uint32_t q) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < lead && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[r * cols + j]);
        }
        std::uint64_t pinv = mod_inverse(a[r * cols + c], q);
        for (std::size_t j = 0; j < cols; ++j) {
            a[r * cols + j] = static_cast<std::uint32_t>((a[r * cols + j] * pinv) % q);
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            std::uint64_t f = a[i * cols + c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                std::uint64_t sub = (f * a[r * cols + j]) % q;
                std::uint64_t val = a[i * cols + j] + q - sub;
                if (val >= q) val -= q;
                a[i * cols + j] = static_cast<std::uint32_t>(val);
            }
        }
        ++r;
    }
    return r; // rank of the leading block
}

} // namespace

Matrix::Matrix(const PrimeField& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0u) {
    if (rows == 0 || cols == 0) {
        throw DimensionMismatchError("matrix dimensions must be positive, got " + std::to_string(rows) + "x" +
                                     std::to_string(cols));
    }
}

Matrix Matrix::identity(const PrimeField& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set_raw(i, i, 1u % field.modulus());
    return m;
}

Matrix Matrix::from_rows(const PrimeField& field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::vector<std::int64_t>> copy;
    copy.reserve(rows.size());
    for (const auto& r : rows) copy.emplace_back(r);
    return from_rows(field, copy);
}

Matrix Matrix::from_rows(const PrimeField& field, const std::vector<std::vector<std::int64_t>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DimensionMismatchError("from_rows: empty literal");
    Matrix m(field, rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols_) throw DimensionMismatchError("from_rows: ragged literal");
        for (std::size_t c = 0; c < m.cols_; ++c) m.set_raw(r, c, field.element(rows[r][c]).value());
    }
    return m;
}

Matrix Matrix::row_vector(const std::vector<Fp>& v) {
    if (v.empty()) throw DimensionMismatchError("row_vector: empty");
    Matrix m(v.front().field(), 1, v.size());
    m.set_row(0, v);
    return m;
}

Matrix Matrix::column_vector(const std::vector<Fp>& v) {
    if (v.empty()) throw DimensionMismatchError("column_vector: empty");
    Matrix m(v.front().field(), v.size(), 1);
    m.set_col(0, v);
    return m;
}

Fp Matrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw DimensionMismatchError("index (" + std::to_string(r) + "," + std::to_string(c) + ") out of " + dims(*this));
    }
    return field_.element(a_[r * cols_ + c]);
}

void Matrix::set(std::size_t r, std::size_t c, const Fp& x) {
    if (r >= rows_ || c >= cols_) {
        throw DimensionMismatchError("index (" + std::to_string(r) + "," + std::to_string(c) + ") out of " + dims(*this));
    }
    if (x.modulus() != field_.modulus()) throw FieldMismatchError("element field differs from matrix field");
    a_[r * cols_ + c] = x.value();
}

std::vector<Fp> Matrix::row(std::size_t r) const {
    std::vector<Fp> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(r, c));
    return out;
}

std::vector<Fp> Matrix::col(std::size_t c) const {
    std::vector<Fp> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
    return out;
}

void Matrix::set_row(std::size_t r, const std::vector<Fp>& v) {
    if (v.size() != cols_) throw DimensionMismatchError("set_row: length mismatch");
    for (std::size_t c = 0; c < cols_; ++c) set(r, c, v[c]);
}

void Matrix::set_col(std::size_t c, const std::vector<Fp>& v) {
    if (v.size() != rows_) throw DimensionMismatchError("set_col: length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) set(r, c, v[r]);
}

Matrix Matrix::select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    Matrix out(field_, row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            if (row_idx[i] >= rows_ || col_idx[j] >= cols_) throw DimensionMismatchError("select: index out of range");
            out.set_raw(i, j, raw(row_idx[i], col_idx[j]));
        }
    }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> row_idx) const {
    std::vector<std::size_t> all(cols_);
    std::iota(all.begin(), all.end(), 0u);
    return select(row_idx, all);
}

Matrix Matrix::select_cols(std::span<const std::size_t> col_idx) const {
    std::vector<std::size_t> all(rows_);
    std::iota(all.begin(), all.end(), 0u);
    return select(all, col_idx);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t height, std::size_t width) const {
    if (r0 + height > rows_ || c0 + width > cols_) throw DimensionMismatchError("block: out of range");
    Matrix out(field_, height, width);
    for (std::size_t r = 0; r < height; ++r) {
        for (std::size_t c = 0; c < width; ++c) out.set_raw(r, c, raw(r0 + r, c0 + c));
    }
    return out;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::uint32_t v) { return v == 0; });
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw DimensionMismatchError("add: " + dims(a) + " vs " + dims(b));
    }
    Matrix out(a.field_, a.rows_, a.cols_);
    std::uint32_t q = a.field_.modulus();
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(a.a_[i]) + b.a_[i];
        out.a_[i] = static_cast<std::uint32_t>(s >= q ? s - q : s);
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw DimensionMismatchError("sub: " + dims(a) + " vs " + dims(b));
    }
    Matrix out(a.field_, a.rows_, a.cols_);
    std::uint32_t q = a.field_.modulus();
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        std::uint64_t s = static_cast<std::uint64_t>(a.a_[i]) + q - b.a_[i];
        out.a_[i] = static_cast<std::uint32_t>(s >= q ? s - q : s);
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.cols_ != b.rows_) throw DimensionMismatchError("mul: " + dims(a) + " times " + dims(b));
    Matrix out(a.field_, a.rows_, b.cols_);
    std::uint64_t q = a.field_.modulus();
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t j = 0; j < b.cols_; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t m = 0; m < a.cols_; ++m) {
                acc = (acc + static_cast<std::uint64_t>(a.raw(i, m)) * b.raw(m, j)) % q;
            }
            out.set_raw(i, j, static_cast<std::uint32_t>(acc));
        }
    }
    return out;
}

Matrix operator*(const Fp& s, const Matrix& a) {
    if (s.modulus() != a.field_.modulus()) throw FieldMismatchError("scalar field differs from matrix field");
    Matrix out(a.field_, a.rows_, a.cols_);
    std::uint64_t q = a.field_.modulus();
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        out.a_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(s.value()) * a.a_[i]) % q);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << (r == 0 ? "[" : " ");
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.raw(r, c);
        os << (r + 1 == m.rows() ? "]" : "\n");
    }
    return os;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.field(), m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out.set_raw(c, r, m.raw(r, c));
    }
    return out;
}

std::size_t rank(const Matrix& m) {
    std::vector<std::uint32_t> a(m.rows() * m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) a[r * m.cols() + c] = m.raw(r, c);
    }
    return gauss_jordan(a, m.rows(), m.cols(), m.cols(), m.field().modulus());
}

bool is_nonsingular(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("inverse: matrix is " + dims(m));
    std::size_t n = m.rows();
    std::uint32_t q = m.field().modulus();
    std::vector<std::uint32_t> aug(n * 2 * n, 0u);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r * 2 * n + c] = m.raw(r, c);
        aug[r * 2 * n + n + r] = 1u % q;
    }
    std::size_t rk = gauss_jordan(aug, n, 2 * n, n, q);
    if (rk < n) throw SingularMatrixError("inverse: rank " + std::to_string(rk) + " < " + std::to_string(n));
    Matrix out(m.field(), n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out.set_raw(r, c, aug[r * 2 * n + n + c]);
    }
    return out;
}

Matrix solve_left(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols()) throw DimensionMismatchError("solve_left: matrix is " + dims(a));
    if (a.rows() != b.rows()) throw DimensionMismatchError("solve_left: " + dims(a) + " vs rhs " + dims(b));
    std::size_t n = a.rows(), w = b.cols();
    std::uint32_t q = a.field().modulus();
    std::vector<std::uint32_t> aug(n * (n + w), 0u);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r * (n + w) + c] = a.raw(r, c);
        for (std::size_t c = 0; c < w; ++c) aug[r * (n + w) + n + c] = b.raw(r, c);
    }
    std::size_t rk = gauss_jordan(aug, n, n + w, n, q);
    if (rk < n) throw SingularMatrixError("solve_left: rank " + std::to_string(rk) + " < " + std::to_string(n));
    Matrix out(a.field(), n, w);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < w; ++c) out.set_raw(r, c, aug[r * (n + w) + n + c]);
    }
    return out;
}

Matrix solve_right(const Matrix& a, const Matrix& b) {
    // X A = B  <=>  A^T X^T = B^T
    return transpose(solve_left(transpose(a), transpose(b)));
}

Matrix vandermonde(const PrimeField& field, std::size_t rows, const std::vector<Fp>& points) {
    if (rows == 0 || points.empty()) throw DimensionMismatchError("vandermonde: empty shape");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].modulus() != field.modulus()) throw FieldMismatchError("vandermonde: point field mismatch");
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i] == points[j]) {
                throw DuplicatePointError("vandermonde: duplicate point " + std::to_string(points[i].value()));
            }
        }
    }
    Matrix m(field, rows, points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Fp p = field.one();
        for (std::size_t r = 0; r < rows; ++r) {
            m.set(r, i, p);
            p *= points[i];
        }
    }
    return m;
}

Matrix cauchy(const PrimeField& field, const std::vector<Fp>& a_pts, const std::vector<Fp>& b_pts) {
    if (a_pts.empty() || b_pts.empty()) throw DimensionMismatchError("cauchy: empty point list");
    auto check_distinct = [](const std::vector<Fp>& pts, const char* which) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (pts[i] == pts[j]) {
                    throw CollidingPointsError(std::string("cauchy: duplicate ") + which + " point " +
                                               std::to_string(pts[i].value()));
                }
            }
        }
    };
    check_distinct(a_pts, "a");
    check_distinct(b_pts, "b");
    for (const Fp& a : a_pts) {
        if (a.modulus() != field.modulus()) throw FieldMismatchError("cauchy: point field mismatch");
        for (const Fp& b : b_pts) {
            if (a == b) throw CollidingPointsError("cauchy: a and b share point " + std::to_string(a.value()));
        }
    }
    Matrix m(field, a_pts.size(), b_pts.size());
    for (std::size_t i = 0; i < a_pts.size(); ++i) {
        for (std::size_t j = 0; j < b_pts.size(); ++j) m.set(i, j, (a_pts[i] - b_pts[j]).inv());
    }
    return m;
}

bool is_superregular(const Matrix& m, std::size_t cap) {
    std::size_t mn = std::min(m.rows(), m.cols());
    if (mn > cap) {
        throw SizeCapError("is_superregular: min dimension " + std::to_string(mn) + " exceeds cap " +
                           std::to_string(cap));
    }
    for (std::size_t s = 1; s <= mn; ++s) {
        bool ok = for_each_combination(m.rows(), s, [&](std::span<const std::size_t> rsel) {
            return for_each_combination(m.cols(), s, [&](std::span<const std::size_t> csel) {
                return is_nonsingular(m.select(rsel, csel));
            });
        });
        if (!ok) return false;
    }
    return true;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        std::uint64_t num = n - k + i;
        // out * num / i is exact at every step; saturate on overflow.
        if (out > UINT64_MAX / num) return UINT64_MAX;
        out = out * num / i;
    }
    return out;
}

bool for_each_combination(std::size_t n, std::size_t k, const std::function<bool(std::span<const std::size_t>)>& fn) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0u);
    while (true) {
        if (!fn(idx)) return false;
        // advance to the next lexicographic k-subset
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

namespace {

// Checks `pred` over column subsets of size k out of n: exhaustively when
// C(n, k) fits the cap, otherwise on sampled subsets.
SubmatrixCheck scan_column_subsets(std::size_t n, std::size_t k, const SubsetScanOptions& opts,
                                   const std::function<bool(std::span<const std::size_t>)>& pred) {
    SubmatrixCheck out;
    if (binomial(n, k) <= opts.enumeration_cap) {
        out.exhaustive = true;
        out.ok = for_each_combination(n, k, [&](std::span<const std::size_t> sel) {
            ++out.checked;
            return pred(sel);
        });
    } else {
        out.exhaustive = false;
        out.ok = true;
        std::mt19937_64 rng(opts.seed);
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        for (std::uint64_t trial = 0; trial < opts.samples; ++trial) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<std::size_t> sel(all.begin(), all.begin() + k);
            std::sort(sel.begin(), sel.end());
            ++out.checked;
            if (!pred(sel)) {
                out.ok = false;
                break;
            }
        }
    }
    return out;
}

} // namespace

MbcrConditionReport check_mbcr_conditions(const Matrix& u, const Matrix& v, std::size_t k,
                                          const SubsetScanOptions& opts) {
    if (u.cols() != v.cols()) throw DimensionMismatchError("check_mbcr_conditions: U and V column counts differ");
    if (v.rows() <= u.rows()) throw DimensionMismatchError("check_mbcr_conditions: V must have more rows than U");
    if (k == 0 || k > u.rows()) throw DimensionMismatchError("check_mbcr_conditions: k out of range");
    require_same_field(u, v);

    std::size_t n = u.cols();
    std::size_t d = u.rows();
    std::size_t dt = v.rows();

    MbcrConditionReport rep;
    rep.u_full = scan_column_subsets(n, d, opts,
                                     [&](std::span<const std::size_t> sel) { return is_nonsingular(u.select_cols(sel)); });
    rep.v_full = scan_column_subsets(n, dt, opts,
                                     [&](std::span<const std::size_t> sel) { return is_nonsingular(v.select_cols(sel)); });
    Matrix u_top = u.block(0, 0, k, n);
    Matrix v_top = v.block(0, 0, k, n);
    rep.u_top = scan_column_subsets(
        n, k, opts, [&](std::span<const std::size_t> sel) { return is_nonsingular(u_top.select_cols(sel)); });
    rep.v_top = scan_column_subsets(
        n, k, opts, [&](std::span<const std::size_t> sel) { return is_nonsingular(v_top.select_cols(sel)); });
    return rep;
}

} // namespace crgn
