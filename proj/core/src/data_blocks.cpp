#include "parsim/data_blocks.hpp"

#include <sstream>

#include "parsim/error.hpp"
#include "parsim/linalg.hpp"

namespace parsim {

Matrix build_hankel(const Vector& signal, Index first, Index rows, Index cols) {
  if (first < 0 || rows < 1 || cols < 1 || first + rows + cols - 2 >= signal.size()) {
    std::ostringstream msg;
    msg << "Hankel block out of range: first=" << first << " rows=" << rows
        << " cols=" << cols << " signal length=" << signal.size();
    throw Error(ErrorCategory::config, msg.str());
  }
  Matrix h(rows, cols);
  for (Index r = 0; r < rows; ++r) h.row(r) = signal.segment(first + r, cols).transpose();
  return h;
}

RowVector DataBlocks::y_row(Index i) const {
  if (i < 1 || i > f) throw Error(ErrorCategory::config, "y_row: row index out of range");
  return y_future.row(i - 1);
}

Matrix DataBlocks::u_stack(Index i) const {
  if (i < 0 || i > f) throw Error(ErrorCategory::config, "u_stack: row count out of range");
  return u_future.topRows(i);
}

DataBlocks assemble_blocks(const SignalRecord& rec, Index f, Index p) {
  rec.validate();
  if (f < 1 || p < 1) throw Error(ErrorCategory::config, "horizons f and p must be >= 1");
  if (rec.size() < f + p) {
    std::ostringstream msg;
    msg << "record too short: length " << rec.size() << ", need at least f + p = " << f + p;
    throw Error(ErrorCategory::config, msg.str());
  }
  DataBlocks b;
  b.f = f;
  b.p = p;
  b.columns = rec.size() - f - p + 1;
  b.k_origin = p;
  b.u_past = build_hankel(rec.u, 0, p, b.columns);
  b.y_past = build_hankel(rec.y, 0, p, b.columns);
  b.u_future = build_hankel(rec.u, p, f, b.columns);
  b.y_future = build_hankel(rec.y, p, f, b.columns);
  b.z_past.resize(2 * p, b.columns);
  b.z_past << b.y_past, b.u_past;
  return b;
}

void require_input_excitation(const DataBlocks& blocks) {
  Matrix inputs(blocks.p + blocks.f, blocks.columns);
  inputs << blocks.u_past, blocks.u_future;
  const Index rank = linalg::numerical_rank(inputs.transpose());
  if (rank < inputs.rows()) {
    std::ostringstream msg;
    msg << "input is not persistently exciting of order f + p = " << inputs.rows()
        << " (input Hankel rank " << rank << ")";
    throw Error(ErrorCategory::excitation, msg.str());
  }
}

OrthogonalComplement::OrthogonalComplement(const Matrix& u_future) {
  const Matrix ut = u_future.transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(linalg::rank_threshold(ut.rows(), ut.cols()));
  qr.compute(ut);
  if (qr.rank() < ut.cols()) {
    std::ostringstream msg;
    msg << "insufficient excitation: U_f has rank " << qr.rank() << " < " << ut.cols()
        << ", U_f U_f' is singular";
    throw Error(ErrorCategory::excitation, msg.str());
  }
  basis_ = qr.householderQ() * Matrix::Identity(ut.rows(), ut.cols());
}

Matrix OrthogonalComplement::apply(const Matrix& m) const {
  if (m.cols() != size()) {
    throw Error(ErrorCategory::config, "projector: operand has wrong column count");
  }
  return m - (m * basis_) * basis_.transpose();
}

Matrix OrthogonalComplement::dense() const {
  if (size() > kMaxDenseSize) {
    throw Error(ErrorCategory::config, "projector too large to materialise densely");
  }
  return Matrix::Identity(size(), size()) - basis_ * basis_.transpose();
}

OrthogonalComplement orth_projection_complement(const Matrix& u_future) {
  return OrthogonalComplement(u_future);
}

}  // namespace parsim
