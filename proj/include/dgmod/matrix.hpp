#pragma once

#include <vector>
#include <initializer_list>
#include <string>
#include <sstream>

#include "dgmod/ring.hpp"

namespace dgmod {

/**
 * Dense matrix over a RingSpec with entries kept canonical.
 * Rows/cols may be zero; a 0xN or Nx0 matrix is a legitimate value.
 */
struct Matrix {
    RingSpec ring;
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;  // row-major

    Matrix() = default;
    Matrix(RingSpec r, int m, int n) : ring(r), rows(m), cols(n), a((size_t)m * n, Rat(0)) {}

    static Matrix identity(RingSpec r, int n) {
        Matrix I(r, n, n);
        for (int i = 0; i < n; ++i) I.at(i, i) = 1;
        return I;
    }
    static Matrix zero(RingSpec r, int m, int n) { return Matrix(r, m, n); }

    static Matrix from_rows(RingSpec r, std::initializer_list<std::initializer_list<long long>> rws) {
        int m = (int)rws.size();
        int n = m ? (int)rws.begin()->size() : 0;
        Matrix out(r, m, n);
        int i = 0;
        for (auto& row : rws) {
            if ((int)row.size() != n) throw ShapeError("ragged initializer");
            int j = 0;
            for (auto v : row) out.at(i, j++) = r.canon(Rat(v));
            ++i;
        }
        return out;
    }

    Rat& at(int i, int j) { return a[(size_t)i * cols + j]; }
    const Rat& at(int i, int j) const { return a[(size_t)i * cols + j]; }

    void set(int i, int j, const Rat& v) { at(i, j) = ring.canon(v); }

    void canonicalize() {
        for (auto& x : a) x = ring.canon(x);
    }

    bool is_zero() const {
        for (auto& x : a)
            if (!ring.is_zero(x)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return ring == o.ring && rows == o.rows && cols == o.cols && a == o.a;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const {
        if (ring != o.ring) throw RingMismatch("matrix product over different rings");
        if (cols != o.rows) throw ShapeError("matrix product shape mismatch");
        Matrix out(ring, rows, o.cols);
        if (ring.kind == RingKind::PrimeField && ring.modulus < (Int(1) << 30)) {
            // native arithmetic for small prime fields
            const long long p = (long long)ring.modulus;
            std::vector<long long> acc((size_t)rows * o.cols, 0);
            for (int i = 0; i < rows; ++i)
                for (int k = 0; k < cols; ++k) {
                    long long x = (long long)rat_num(at(i, k));
                    if (!x) continue;
                    for (int j = 0; j < o.cols; ++j) {
                        long long y = (long long)rat_num(o.at(k, j));
                        if (!y) continue;
                        acc[(size_t)i * o.cols + j] = (acc[(size_t)i * o.cols + j] + x * y) % p;
                    }
                }
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < o.cols; ++j) out.at(i, j) = Rat(acc[(size_t)i * o.cols + j]);
            return out;
        }
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const Rat& x = at(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols; ++j) {
                    if (o.at(k, j) == 0) continue;
                    out.at(i, j) += x * o.at(k, j);
                }
            }
        out.canonicalize();
        return out;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows != o.rows || cols != o.cols) throw ShapeError("matrix sum shape mismatch");
        Matrix out(ring, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) out.a[i] = ring.add(a[i], o.a[i]);
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        if (rows != o.rows || cols != o.cols) throw ShapeError("matrix difference shape mismatch");
        Matrix out(ring, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) out.a[i] = ring.sub(a[i], o.a[i]);
        return out;
    }
    Matrix operator-() const {
        Matrix out(ring, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) out.a[i] = ring.neg(a[i]);
        return out;
    }
    Matrix scaled(const Rat& c) const {
        Matrix out(ring, rows, cols);
        for (size_t i = 0; i < a.size(); ++i) out.a[i] = ring.mul(a[i], c);
        return out;
    }

    Matrix transposed() const {
        Matrix out(ring, cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out.at(j, i) = at(i, j);
        return out;
    }

    Matrix col(int j) const {
        Matrix out(ring, rows, 1);
        for (int i = 0; i < rows; ++i) out.at(i, 0) = at(i, j);
        return out;
    }

    Matrix cols_slice(const std::vector<int>& idx) const {
        Matrix out(ring, rows, (int)idx.size());
        for (int j = 0; j < (int)idx.size(); ++j)
            for (int i = 0; i < rows; ++i) out.at(i, j) = at(i, idx[j]);
        return out;
    }

    Matrix rows_slice(int r0, int r1) const {  // rows [r0, r1)
        Matrix out(ring, r1 - r0, cols);
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < cols; ++j) out.at(i - r0, j) = at(i, j);
        return out;
    }

    // [this | o]
    Matrix hstack(const Matrix& o) const {
        if (rows != o.rows) throw ShapeError("hstack row mismatch");
        Matrix out(ring, rows, cols + o.cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) out.at(i, j) = at(i, j);
            for (int j = 0; j < o.cols; ++j) out.at(i, cols + j) = o.at(i, j);
        }
        return out;
    }
    // [this ; o]
    Matrix vstack(const Matrix& o) const {
        if (cols != o.cols) throw ShapeError("vstack col mismatch");
        Matrix out(ring, rows + o.rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) out.at(i, j) = at(i, j);
        for (int i = 0; i < o.rows; ++i)
            for (int j = 0; j < cols; ++j) out.at(rows + i, j) = o.at(i, j);
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < rows; ++i) {
            os << (i ? "; " : "");
            for (int j = 0; j < cols; ++j) os << (j ? " " : "") << at(i, j);
        }
        os << "]";
        return os.str();
    }
};

inline Matrix direct_sum(const Matrix& A, const Matrix& B) {
    Matrix out(A.ring, A.rows + B.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) out.at(i, j) = A.at(i, j);
    for (int i = 0; i < B.rows; ++i)
        for (int j = 0; j < B.cols; ++j) out.at(A.rows + i, A.cols + j) = B.at(i, j);
    return out;
}

}  // namespace dgmod
