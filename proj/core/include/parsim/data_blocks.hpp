#pragma once

#include "parsim/ss_model.hpp"
#include "parsim/types.hpp"

namespace parsim {

/// Hankel matrix with entry (r, c) = signal[first + r + c].
Matrix build_hankel(const Vector& signal, Index first, Index rows, Index cols);

/// Past/future block matrices of one record, SISO.
///
/// Column j corresponds to time k_origin + j, with k_origin = p, so that
///   u_past(r, j)   = u[j + r]          r = 0..p-1
///   u_future(r, j) = u[p + j + r]      r = 0..f-1
/// and likewise for y. z_past stacks [y_past; u_past].
struct DataBlocks {
  Matrix u_past;
  Matrix y_past;
  Matrix u_future;
  Matrix y_future;
  Matrix z_past;
  Index f = 0;
  Index p = 0;
  Index columns = 0;
  Index k_origin = 0;

  /// Y_fi: row i (1-based) of the future outputs.
  RowVector y_row(Index i) const;
  /// U_i: the first i rows of the future inputs.
  Matrix u_stack(Index i) const;
};

/// Throws ErrorCategory::config when the record is shorter than f + p.
DataBlocks assemble_blocks(const SignalRecord& rec, Index f, Index p);

/// Throws ErrorCategory::excitation unless the stacked input Hankel
/// [u_past; u_future] has full row rank (input persistently exciting of order f + p).
void require_input_excitation(const DataBlocks& blocks);

/// Orthogonal complement of the row space of U_f, i.e. the operator
/// I - U_f' (U_f U_f')^{-1} U_f acting on the N-dimensional column index.
///
/// Held as an orthonormal basis Q of range(U_f'), so the N x N matrix is only
/// formed on request.
class OrthogonalComplement {
 public:
  static constexpr Index kMaxDenseSize = 4000;

  explicit OrthogonalComplement(const Matrix& u_future);

  Index size() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  /// M * Pi_perp for a matrix with size() columns.
  Matrix apply(const Matrix& m) const;

  /// Dense Pi_perp. Throws ErrorCategory::config when size() > kMaxDenseSize.
  Matrix dense() const;

 private:
  Matrix basis_;
};

/// Throws ErrorCategory::excitation when U_f U_f' is singular.
OrthogonalComplement orth_projection_complement(const Matrix& u_future);

}  // namespace parsim
