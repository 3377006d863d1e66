#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>

#include "simorder/embeddings.hpp"

namespace simorder {

/// Rows per block when accumulating X^T X. Fixed so that the summation order,
/// and therefore the rounding, does not depend on thread count.
inline constexpr std::size_t kGramChunkRows = 4096;

inline constexpr double kDefaultEigFloor = 1e-10;

/// Eigendecomposition G = Q diag(lambda) Q^T of a gram matrix.
/// Columns of q are eigenvectors, lambda is sorted descending and clamped at 0.
/// Each column has its largest-magnitude component positive (lowest index wins
/// ties), so the basis is reproducible byte for byte.
struct EigenBasis {
  Matrix q;
  Vector lambda;
  std::size_t clamped_negative = 0;  // round-off negatives set to 0

  std::size_t source_dim() const noexcept { return static_cast<std::size_t>(lambda.size()); }
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

/// W_alpha = Q diag(lambda_eff^alpha), lambda_eff = max(lambda, eig_floor * lambda_max).
/// The implied similarity order is 2 * alpha + 1.
struct TransformSpec {
  BasisPtr basis;
  double alpha = 0.0;
  double eig_floor = kDefaultEigFloor;
  Vector scale;                   // lambda_eff^alpha, one entry per basis column
  std::size_t clamped_count = 0;  // eigenvalues raised to the floor

  double similarity_order() const noexcept { return 2.0 * alpha + 1.0; }
};

/// Streams rows in and sums per-chunk X_c^T X_c in arrival order.
class GramAccumulator {
 public:
  explicit GramAccumulator(std::size_t dim);

  void add_row(std::span<const double> row);
  /// Symmetrized X^T X of everything added so far.
  Matrix finish();
  std::size_t rows() const noexcept { return rows_; }

 private:
  void flush();

  std::size_t dim_;
  Matrix chunk_;
  Eigen::Index filled_ = 0;
  Matrix total_;
  std::size_t rows_ = 0;
};

/// X^T X, chunked by kGramChunkRows and reduced in chunk order, then
/// symmetrized as (G + G^T) / 2.
Matrix gram(const Matrix& x);
Matrix gram(const EmbeddingMatrix& emb);

/// X^T X over the first `max_rows` unique rows of a file, without loading it.
/// Bit-identical to gram(load_embeddings(path, format, max_rows)); with
/// `normalize`, rows are scaled to unit length first as normalize_rows does.
Matrix gram_from_file(const std::filesystem::path& path, Format format,
                      std::optional<std::size_t> max_rows, bool normalize = false);

/// Cyclic Jacobi eigensolver for a symmetric positive semidefinite matrix.
/// Throws std::invalid_argument if g is not symmetric (1e-12 relative) or has an
/// eigenvalue below -1e-8 * lambda_max, NonConvergence if `max_sweeps` is hit.
EigenBasis sym_eig(const Matrix& g, int max_sweeps = 60);

TransformSpec make_transform(BasisPtr basis, double alpha, double eig_floor = kDefaultEigFloor);

/// The d x d matrix W_alpha itself.
Matrix transform_matrix(const TransformSpec& t);

/// X' = X W_alpha, computed as X * (Q diag(scale)).
EmbeddingMatrix apply_transform(const EmbeddingMatrix& emb, const TransformSpec& t);

/// XQ. Every W_alpha applied to X is then a column scaling of this matrix.
EmbeddingMatrix precompute_rotated(const EmbeddingMatrix& emb, const EigenBasis& basis);
Matrix precompute_rotated(const Matrix& x, const EigenBasis& basis);

/// (XQ) diag(scale).
Matrix scale_columns(const Matrix& rotated, const TransformSpec& t);
EmbeddingMatrix scale_columns(const EmbeddingMatrix& rotated, const TransformSpec& t);

enum class Metric { Dot, Cosine };

/// Entry (i, j) of M(X) = XX^T, or of its cosine counterpart. A zero row has
/// cosine 0 with everything.
double pairwise_similarity(const EmbeddingMatrix& emb, RowId i, RowId j, Metric metric);

/// Binary record: "SIMOBAS1", uint64 d, Q column-major, lambda; all little-endian.
void save_basis(const EigenBasis& basis, const std::filesystem::path& path);
EigenBasis load_basis(const std::filesystem::path& path);

}  // namespace simorder
