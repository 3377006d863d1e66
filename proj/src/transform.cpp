#include "simorder/transform.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "simorder/error.hpp"

namespace simorder {

namespace {

// Chunks whose products are computed together (possibly in parallel) before
// being added to the running total one by one, in order.
constexpr std::size_t kChunksPerGroup = 16;

// total += sum over consecutive kGramChunkRows-row blocks of `rows`, in order.
void accumulate_group(const Matrix& rows, Eigen::Index count, Matrix& total) {
  const auto chunk = static_cast<Eigen::Index>(kGramChunkRows);
  const Eigen::Index n_chunks = (count + chunk - 1) / chunk;
  std::vector<Matrix> partial(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < n_chunks; ++c) {
    const Eigen::Index begin = c * chunk;
    const Eigen::Index len = std::min(chunk, count - begin);
    const auto block = rows.middleRows(begin, len);
    partial[static_cast<std::size_t>(c)].noalias() = block.transpose() * block;
  }
  for (const auto& p : partial) total += p;
}

Matrix symmetrize(const Matrix& g) { return (g + g.transpose()) * 0.5; }

void write_u64(std::ostream& out, std::uint64_t v) {
  const auto bytes = std::bit_cast<std::array<char, 8>>(v);
  out.write(bytes.data(), 8);
}

void write_f64(std::ostream& out, double v) {
  const auto bytes = std::bit_cast<std::array<char, 8>>(v);
  out.write(bytes.data(), 8);
}

template <typename T>
T read_scalar(std::istream& in, const std::string& name) {
  std::array<char, 8> bytes;
  in.read(bytes.data(), 8);
  if (in.gcount() != 8) throw ParseError(name, static_cast<std::size_t>(in.tellg()), "short read");
  return std::bit_cast<T>(bytes);
}

constexpr char kBasisMagic[8] = {'S', 'I', 'M', 'O', 'B', 'A', 'S', '1'};

}  // namespace

// ---------------------------------------------------------------------------
// Gram matrix

GramAccumulator::GramAccumulator(std::size_t dim)
    : dim_(dim), total_(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))) {}

void GramAccumulator::add_row(std::span<const double> row) {
  if (row.size() != dim_) throw std::invalid_argument("row dimension mismatch in gram accumulation");
  if (chunk_.rows() == 0) {
    chunk_.resize(static_cast<Eigen::Index>(kGramChunkRows * kChunksPerGroup),
                  static_cast<Eigen::Index>(dim_));
  }
  chunk_.row(filled_) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(dim_));
  ++filled_;
  ++rows_;
  if (filled_ == chunk_.rows()) flush();
}

void GramAccumulator::flush() {
  if (filled_ > 0) accumulate_group(chunk_, filled_, total_);
  filled_ = 0;
}

Matrix GramAccumulator::finish() {
  flush();
  return symmetrize(total_);
}

Matrix gram(const Matrix& x) {
  Matrix total = Matrix::Zero(x.cols(), x.cols());
  const auto group = static_cast<Eigen::Index>(kGramChunkRows * kChunksPerGroup);
  for (Eigen::Index begin = 0; begin < x.rows(); begin += group) {
    const Eigen::Index len = std::min(group, x.rows() - begin);
    // Copy keeps the chunk layout identical to the streaming path.
    const Matrix rows = x.middleRows(begin, len);
    accumulate_group(rows, len, total);
  }
  return symmetrize(total);
}

Matrix gram(const EmbeddingMatrix& emb) { return gram(emb.data()); }

Matrix gram_from_file(const std::filesystem::path& path, Format format,
                      std::optional<std::size_t> max_rows, bool normalize) {
  std::optional<GramAccumulator> acc;
  std::size_t dim = 0;
  Eigen::RowVectorXd row;
  for_each_row(path, format, max_rows, dim, [&](std::string&&, std::span<const double> values) {
    if (!acc) acc.emplace(values.size());
    if (!normalize) {
      acc->add_row(values);
      return;
    }
    row = Eigen::Map<const Eigen::RowVectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    const double norm = row.norm();
    if (norm > 0.0) row /= norm;
    acc->add_row(std::span<const double>(row.data(), values.size()));
  });
  if (!acc) throw ParseError(path.string(), 0, "empty embedding set");
  return acc->finish();
}

// ---------------------------------------------------------------------------
// Eigendecomposition

EigenBasis sym_eig(const Matrix& g, int max_sweeps) {
  if (g.rows() != g.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  const Eigen::Index n = g.rows();
  const double scale = n > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
  if (n > 0 && (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric");
  }
  if (!g.allFinite()) throw std::invalid_argument("sym_eig: non-finite entries");

  // a: working copy, row-major n x n. vt: row k holds the k-th eigenvector.
  std::vector<double> a(g.data(), g.data() + n * n);
  std::vector<double> vt(static_cast<std::size_t>(n * n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  auto at = [&](Eigen::Index i, Eigen::Index j) -> double& { return a[i * n + j]; };
  const double eps = std::numeric_limits<double>::epsilon();
  const double frob = g.norm();
  const double abs_floor = 1e-18 * frob;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
    return std::sqrt(2.0 * s);
  };

  int sweep = 0;
  for (;; ++sweep) {
    if (sweep == max_sweeps) throw NonConvergence(off_norm(), sweep);
    std::size_t rotations = 0;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        const double app = at(p, p);
        const double aqq = at(q, q);
        if (std::abs(apq) <= abs_floor || std::abs(apq) <= eps * std::sqrt(std::abs(app * aqq))) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        ++rotations;
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = at(q, p) = 0.0;
        double* row_p = &a[p * n];
        double* row_q = &a[q * n];
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = row_p[k];
          const double akq = row_q[k];
          const double new_p = c * akp - s * akq;
          const double new_q = s * akp + c * akq;
          row_p[k] = new_p;
          row_q[k] = new_q;
          a[k * n + p] = new_p;
          a[k * n + q] = new_q;
        }
        double* vp = &vt[p * n];
        double* vq = &vt[q * n];
        for (Eigen::Index k = 0; k < n; ++k) {
          const double x = vp[k];
          const double y = vq[k];
          vp[k] = c * x - s * y;
          vq[k] = s * x + c * y;
        }
      }
    }
    if (rotations == 0) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return at(x, x) > at(y, y); });

  EigenBasis basis;
  basis.q.resize(n, n);
  basis.lambda.resize(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const Eigen::Index src = order[static_cast<std::size_t>(col)];
    basis.lambda(col) = at(src, src);
    const double* v = &vt[src * n];
    Eigen::Index big = 0;
    for (Eigen::Index k = 1; k < n; ++k) {
      if (std::abs(v[k]) > std::abs(v[big])) big = k;
    }
    const double sign = v[big] < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index k = 0; k < n; ++k) basis.q(k, col) = sign * v[k];
  }

  if (n > 0) {
    const double lambda_max = basis.lambda(0);
    const double tol = 1e-8 * (lambda_max > 0.0 ? lambda_max : scale);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (basis.lambda(i) >= 0.0) continue;
      if (basis.lambda(i) < -tol) {
        throw std::invalid_argument("sym_eig: matrix is not positive semidefinite (eigenvalue " +
                                    std::to_string(basis.lambda(i)) + ")");
      }
      basis.lambda(i) = 0.0;
      ++basis.clamped_negative;
    }
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Transform

TransformSpec make_transform(BasisPtr basis, double alpha, double eig_floor) {
  if (!basis) throw std::invalid_argument("make_transform: null basis");
  if (!std::isfinite(alpha)) throw std::invalid_argument("make_transform: alpha must be finite");
  if (!(eig_floor > 0.0) || !std::isfinite(eig_floor)) {
    throw std::invalid_argument("make_transform: eig_floor must be positive");
  }
  TransformSpec t;
  t.alpha = alpha;
  t.eig_floor = eig_floor;
  const auto& lambda = basis->lambda;
  const Eigen::Index d = lambda.size();
  t.scale.resize(d);
  const double lambda_max = d > 0 ? lambda.maxCoeff() : 0.0;
  const double floor_abs = eig_floor * lambda_max;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (lambda_max <= 0.0) {
      // X is zero: any scale gives X' = 0.
      t.scale(i) = 1.0;
      continue;
    }
    double eff = lambda(i);
    if (eff < floor_abs) {
      eff = floor_abs;
      ++t.clamped_count;
    }
    t.scale(i) = alpha == 0.0 ? 1.0 : std::pow(eff, alpha);
  }
  t.basis = std::move(basis);
  return t;
}

Matrix transform_matrix(const TransformSpec& t) { return t.basis->q * t.scale.asDiagonal(); }

EmbeddingMatrix apply_transform(const EmbeddingMatrix& emb, const TransformSpec& t) {
  if (emb.dim() != t.basis->source_dim()) {
    throw std::invalid_argument("apply_transform: embedding dimension " + std::to_string(emb.dim()) +
                                " does not match basis dimension " +
                                std::to_string(t.basis->source_dim()));
  }
  const Matrix w = transform_matrix(t);
  Matrix out = emb.data() * w;
  return emb.with_data(std::move(out));
}

Matrix precompute_rotated(const Matrix& x, const EigenBasis& basis) {
  if (static_cast<std::size_t>(x.cols()) != basis.source_dim()) {
    throw std::invalid_argument("precompute_rotated: dimension mismatch");
  }
  return x * basis.q;
}

EmbeddingMatrix precompute_rotated(const EmbeddingMatrix& emb, const EigenBasis& basis) {
  return emb.with_data(precompute_rotated(emb.data(), basis));
}

Matrix scale_columns(const Matrix& rotated, const TransformSpec& t) {
  if (rotated.cols() != t.scale.size()) throw std::invalid_argument("scale_columns: dimension mismatch");
  return rotated * t.scale.asDiagonal();
}

EmbeddingMatrix scale_columns(const EmbeddingMatrix& rotated, const TransformSpec& t) {
  return rotated.with_data(scale_columns(rotated.data(), t));
}

double pairwise_similarity(const EmbeddingMatrix& emb, RowId i, RowId j, Metric metric) {
  if (i >= emb.size() || j >= emb.size()) {
    throw std::out_of_range("pairwise_similarity: row id out of range");
  }
  const auto xi = emb.row(i);
  const auto xj = emb.row(j);
  const double dot = xi.dot(xj);
  if (metric == Metric::Dot) return dot;
  const double ni = xi.norm();
  const double nj = xj.norm();
  if (ni == 0.0 || nj == 0.0) return 0.0;
  return (xi / ni).dot(xj / nj);
}

// ---------------------------------------------------------------------------
// Persistence

void save_basis(const EigenBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const auto d = static_cast<Eigen::Index>(basis.source_dim());
  out.write(kBasisMagic, sizeof(kBasisMagic));
  write_u64(out, static_cast<std::uint64_t>(d));
  for (Eigen::Index col = 0; col < d; ++col)
    for (Eigen::Index row = 0; row < d; ++row) write_f64(out, basis.q(row, col));
  for (Eigen::Index i = 0; i < d; ++i) write_f64(out, basis.lambda(i));
  if (!out) throw IoError("write failed on " + path.string());
}

EigenBasis load_basis(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + name);
  char magic[sizeof(kBasisMagic)];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kBasisMagic, sizeof(magic)) != 0) {
    throw ParseError(name, 0, "not an eigenbasis file");
  }
  const auto d64 = read_scalar<std::uint64_t>(in, name);
  if (d64 > 100000) throw ParseError(name, 8, "implausible dimension " + std::to_string(d64));
  const auto d = static_cast<Eigen::Index>(d64);
  EigenBasis basis;
  basis.q.resize(d, d);
  basis.lambda.resize(d);
  for (Eigen::Index col = 0; col < d; ++col)
    for (Eigen::Index row = 0; row < d; ++row) basis.q(row, col) = read_scalar<double>(in, name);
  for (Eigen::Index i = 0; i < d; ++i) basis.lambda(i) = read_scalar<double>(in, name);
  if (!basis.q.allFinite() || !basis.lambda.allFinite()) {
    throw ParseError(name, 16, "non-finite value in eigenbasis");
  }
  return basis;
}

}  // namespace simorder
