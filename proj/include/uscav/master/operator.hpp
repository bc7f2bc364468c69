// operator.hpp — parity-graded operators and block density matrices
//
// An operator of parity q maps sector s to sector s ^ q. It is stored as two
// sub-operators indexed by the destination sector; each is either banded
// (element (p, p - h) = c[p] for a set of half-index offsets h) or dense.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace uscav {

using cplx = std::complex<double>;

struct Band {
    int offset;
    Eigen::VectorXcd coeff; // length = rows, zero where the column is out of range
};

class SubOperator {
public:
    SubOperator() = default;
    SubOperator(int rows, int cols) : rows_(rows), cols_(cols) {}
    static SubOperator from_dense(Eigen::MatrixXcd m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_dense() const { return dense_; }
    const std::vector<Band>& bands() const { return bands_; }
    const Eigen::MatrixXcd& dense() const { return mat_; }

    // adds c to band `offset` (creating it)
    void add_band(int offset, const Eigen::VectorXcd& c);
    Eigen::MatrixXcd to_dense() const;
    SubOperator adjoint() const;
    void scale(cplx s);
    void prune(double tol = 0.0); // drop bands whose coefficients are all <= tol

    // out += s * this * m
    void apply_left(const Eigen::MatrixXcd& m, cplx s, Eigen::MatrixXcd& out) const;
    // out += s * m * this
    void apply_right(const Eigen::MatrixXcd& m, cplx s, Eigen::MatrixXcd& out) const;
    // y += s op v
    void apply_vector(const Eigen::Ref<const Eigen::VectorXcd>& v, cplx s, Eigen::VectorXcd& y) const;
    // y += s (m op).col(j)
    void right_column(const Eigen::MatrixXcd& m, int j, cplx s, Eigen::VectorXcd& y) const;

    friend SubOperator operator*(const SubOperator& a, const SubOperator& b);
    friend SubOperator operator+(const SubOperator& a, const SubOperator& b);

private:
    int rows_ = 0, cols_ = 0;
    bool dense_ = false;
    std::vector<Band> bands_;
    Eigen::MatrixXcd mat_;
};

class ParityOperator {
public:
    ParityOperator() = default;
    ParityOperator(int parity, SubOperator to_even, SubOperator to_odd)
        : parity_(parity), blk_{std::move(to_even), std::move(to_odd)} {}

    static ParityOperator identity(const std::array<int, 2>& sizes);
    static ParityOperator zero(int parity, const std::array<int, 2>& sizes);

    int parity() const { return parity_; }
    // maps sector (s ^ parity) into sector s
    const SubOperator& block(int s) const { return blk_[s]; }
    SubOperator& block(int s) { return blk_[s]; }
    bool is_dense() const { return blk_[0].is_dense() || blk_[1].is_dense(); }
    std::array<int, 2> sizes() const { return {blk_[0].rows(), blk_[1].rows()}; }

    ParityOperator adjoint() const;
    double norm() const; // Frobenius

    friend ParityOperator operator*(const ParityOperator& a, const ParityOperator& b);
    friend ParityOperator operator+(const ParityOperator& a, const ParityOperator& b);
    friend ParityOperator operator-(const ParityOperator& a, const ParityOperator& b);
    friend ParityOperator operator*(cplx s, const ParityOperator& a);

private:
    int parity_ = 0;
    std::array<SubOperator, 2> blk_;
};

// parity-even matrix stored as its two diagonal blocks
struct BlockState {
    std::array<Eigen::MatrixXcd, 2> b;

    static BlockState zero(const std::array<int, 2>& sizes);
    cplx trace() const;
    double norm() const;
    void hermitize();
    BlockState& operator+=(const BlockState& o);
    BlockState& axpy(cplx s, const BlockState& o); // this += s o
};

} // namespace uscav
