// operator.cpp — banded/dense sub-operator algebra and application kernels
#include "uscav/master/operator.hpp"
#include "uscav/errors.hpp"

#include <algorithm>
#include <map>

namespace uscav {

namespace {

// rows p of a band with offset h that have a column inside [0, cols)
std::pair<int, int> band_rows(int h, int rows, int cols) {
    const int lo = std::max(0, h);
    const int hi = std::min(rows, cols + h);
    return {lo, std::max(lo, hi)};
}

void check(bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("operator shape mismatch in ") + what);
}

} // namespace

SubOperator SubOperator::from_dense(Eigen::MatrixXcd m) {
    SubOperator s(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    s.dense_ = true;
    s.mat_ = std::move(m);
    return s;
}

void SubOperator::add_band(int offset, const Eigen::VectorXcd& c) {
    check(!dense_ && c.size() == rows_, "add_band");
    Eigen::VectorXcd masked = c;
    const auto [lo, hi] = band_rows(offset, rows_, cols_);
    masked.head(lo).setZero();
    masked.tail(rows_ - hi).setZero();
    for (auto& b : bands_)
        if (b.offset == offset) {
            b.coeff += masked;
            return;
        }
    bands_.push_back({offset, masked});
    std::sort(bands_.begin(), bands_.end(), [](const Band& a, const Band& b) { return a.offset < b.offset; });
}

Eigen::MatrixXcd SubOperator::to_dense() const {
    if (dense_) return mat_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& b : bands_) {
        const auto [lo, hi] = band_rows(b.offset, rows_, cols_);
        for (int p = lo; p < hi; ++p) m(p, p - b.offset) = b.coeff(p);
    }
    return m;
}

SubOperator SubOperator::adjoint() const {
    if (dense_) return from_dense(mat_.adjoint());
    SubOperator out(cols_, rows_);
    for (const auto& b : bands_) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cols_);
        const auto [lo, hi] = band_rows(b.offset, rows_, cols_);
        for (int p = lo; p < hi; ++p) c(p - b.offset) = std::conj(b.coeff(p));
        out.bands_.push_back({-b.offset, c});
    }
    std::sort(out.bands_.begin(), out.bands_.end(), [](const Band& a, const Band& b) { return a.offset < b.offset; });
    return out;
}

void SubOperator::scale(cplx s) {
    if (dense_) mat_ *= s;
    else
        for (auto& b : bands_) b.coeff *= s;
}

void SubOperator::prune(double tol) {
    if (dense_) return;
    std::erase_if(bands_, [tol](const Band& b) { return b.coeff.size() == 0 || b.coeff.cwiseAbs().maxCoeff() <= tol; });
}

void SubOperator::apply_left(const Eigen::MatrixXcd& m, cplx s, Eigen::MatrixXcd& out) const {
    if (dense_) {
        out.noalias() += s * mat_ * m;
        return;
    }
    const Eigen::Index ncol = m.cols();
    for (const auto& b : bands_) {
        const auto [lo, hi] = band_rows(b.offset, rows_, cols_);
        const int len = hi - lo;
        if (len <= 0) continue;
        const auto c = b.coeff.segment(lo, len).array();
        for (Eigen::Index k = 0; k < ncol; ++k)
            out.col(k).segment(lo, len).array() += s * c * m.col(k).segment(lo - b.offset, len).array();
    }
}

void SubOperator::apply_right(const Eigen::MatrixXcd& m, cplx s, Eigen::MatrixXcd& out) const {
    if (dense_) {
        out.noalias() += s * m * mat_;
        return;
    }
    for (const auto& b : bands_) {
        const auto [lo, hi] = band_rows(b.offset, rows_, cols_);
        for (int p = lo; p < hi; ++p) {
            const cplx c = s * b.coeff(p);
            if (c != 0.0) out.col(p - b.offset) += c * m.col(p);
        }
    }
}

void SubOperator::apply_vector(const Eigen::Ref<const Eigen::VectorXcd>& v, cplx s, Eigen::VectorXcd& y) const {
    if (dense_) {
        y.noalias() += s * (mat_ * v);
        return;
    }
    for (const auto& b : bands_) {
        const auto [lo, hi] = band_rows(b.offset, rows_, cols_);
        const int len = hi - lo;
        if (len <= 0) continue;
        y.segment(lo, len).array() += s * b.coeff.segment(lo, len).array() * v.segment(lo - b.offset, len).array();
    }
}

void SubOperator::right_column(const Eigen::MatrixXcd& m, int j, cplx s, Eigen::VectorXcd& y) const {
    if (dense_) {
        y.noalias() += s * (m * mat_.col(j));
        return;
    }
    for (const auto& b : bands_) {
        const int p = j + b.offset;
        if (p < 0 || p >= rows_) continue;
        const cplx c = s * b.coeff(p);
        if (c != 0.0) y += c * m.col(p);
    }
}

SubOperator operator*(const SubOperator& a, const SubOperator& b) {
    check(a.cols_ == b.rows_, "product");
    if (a.dense_ || b.dense_) return SubOperator::from_dense(a.to_dense() * b.to_dense());
    std::map<int, Eigen::VectorXcd> acc;
    for (const auto& ba : a.bands_) {
        const auto [lo, hi] = band_rows(ba.offset, a.rows_, a.cols_);
        for (const auto& bb : b.bands_) {
            const int h = ba.offset + bb.offset;
            auto it = acc.find(h);
            if (it == acc.end()) it = acc.emplace(h, Eigen::VectorXcd::Zero(a.rows_)).first;
            for (int p = lo; p < hi; ++p) it->second(p) += ba.coeff(p) * bb.coeff(p - ba.offset);
        }
    }
    SubOperator out(a.rows_, b.cols_);
    for (auto& [h, c] : acc) out.add_band(h, c);
    out.prune();
    return out;
}

SubOperator operator+(const SubOperator& a, const SubOperator& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "sum");
    if (a.dense_ || b.dense_) return SubOperator::from_dense(a.to_dense() + b.to_dense());
    SubOperator out = a;
    for (const auto& bb : b.bands_) out.add_band(bb.offset, bb.coeff);
    return out;
}

ParityOperator ParityOperator::identity(const std::array<int, 2>& sizes) {
    std::array<SubOperator, 2> blk;
    for (int s = 0; s < 2; ++s) {
        blk[s] = SubOperator(sizes[s], sizes[s]);
        blk[s].add_band(0, Eigen::VectorXcd::Ones(sizes[s]));
    }
    return {0, blk[0], blk[1]};
}

ParityOperator ParityOperator::zero(int parity, const std::array<int, 2>& sizes) {
    return {parity, SubOperator(sizes[0], sizes[parity]), SubOperator(sizes[1], sizes[1 ^ parity])};
}

ParityOperator ParityOperator::adjoint() const {
    ParityOperator out;
    out.parity_ = parity_;
    for (int s = 0; s < 2; ++s) out.blk_[s ^ parity_] = blk_[s].adjoint();
    return out;
}

double ParityOperator::norm() const {
    double n2 = 0;
    for (int s = 0; s < 2; ++s) {
        if (blk_[s].is_dense()) n2 += blk_[s].dense().squaredNorm();
        else
            for (const auto& b : blk_[s].bands()) n2 += b.coeff.squaredNorm();
    }
    return std::sqrt(n2);
}

ParityOperator operator*(const ParityOperator& a, const ParityOperator& b) {
    ParityOperator out;
    out.parity_ = a.parity_ ^ b.parity_;
    for (int s = 0; s < 2; ++s) out.blk_[s] = a.blk_[s] * b.blk_[s ^ a.parity_];
    return out;
}

ParityOperator operator+(const ParityOperator& a, const ParityOperator& b) {
    if (a.parity_ != b.parity_) throw DomainError("sum of operators with different parity");
    ParityOperator out;
    out.parity_ = a.parity_;
    for (int s = 0; s < 2; ++s) out.blk_[s] = a.blk_[s] + b.blk_[s];
    return out;
}

ParityOperator operator*(cplx s, const ParityOperator& a) {
    ParityOperator out = a;
    for (auto& b : out.blk_) b.scale(s);
    return out;
}

ParityOperator operator-(const ParityOperator& a, const ParityOperator& b) { return a + (-1.0) * b; }

BlockState BlockState::zero(const std::array<int, 2>& sizes) {
    BlockState st;
    for (int s = 0; s < 2; ++s) st.b[s] = Eigen::MatrixXcd::Zero(sizes[s], sizes[s]);
    return st;
}

cplx BlockState::trace() const { return b[0].trace() + b[1].trace(); }

double BlockState::norm() const { return std::sqrt(b[0].squaredNorm() + b[1].squaredNorm()); }

void BlockState::hermitize() {
    for (auto& m : b) m = 0.5 * (m + m.adjoint()).eval();
}

BlockState& BlockState::operator+=(const BlockState& o) {
    for (int s = 0; s < 2; ++s) b[s] += o.b[s];
    return *this;
}

BlockState& BlockState::axpy(cplx s, const BlockState& o) {
    for (int k = 0; k < 2; ++k) b[k] += s * o.b[k];
    return *this;
}

} // namespace uscav
