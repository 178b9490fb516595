#include "rpimc/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rpimc {

SparseOperator::SparseOperator(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  row_ptr_.assign(rows + 1, 0);
}

double SparseOperator::diagonal(std::size_t i) const { return coeff(i, i); }

double SparseOperator::coeff(std::size_t i, std::size_t j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), std::uint32_t(j));
  if (it == cols.end() || *it != j) return 0.0;
  return row_values(i)[std::size_t(it - cols.begin())];
}

void SparseOperator::multiply(std::span<const double> x, std::span<double> y,
                              int threads) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("matvec dimension mismatch");
  parallel_for(
      rows_, threads,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          double sum = 0.0;
          const std::size_t lo = row_ptr_[i], hi = row_ptr_[i + 1];
          for (std::size_t p = lo; p < hi; ++p) sum += values_[p] * x[col_index_[p]];
          y[i] = sum;
        }
      },
      8192);
}

void SparseOperator::merge_sorted(std::vector<std::pair<std::uint32_t, double>>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (out > 0 && entries[out - 1].first == entries[i].first) {
      entries[out - 1].second += entries[i].second;
    } else {
      entries[out++] = entries[i];
    }
  }
  entries.resize(out);
}

void SparseOperator::RowBuilder::commit_row() {
  if (op_.row_ptr_.size() > op_.rows_) throw std::logic_error("too many rows committed");
  merge_sorted(entries_);
  for (const auto& [c, v] : entries_) {
    if (c >= op_.cols_) throw std::out_of_range("column index out of range");
    if (!std::isfinite(v)) throw std::domain_error("non-finite operator entry");
    op_.col_index_.push_back(c);
    op_.values_.push_back(v);
  }
  op_.row_ptr_.push_back(op_.col_index_.size());
  entries_.clear();
}

SparseOperator SparseOperator::RowBuilder::finish() {
  if (op_.row_ptr_.size() != op_.rows_ + 1)
    throw std::logic_error("row count mismatch at finish");
  return std::move(op_);
}

template <class Pick>
SparseOperator SparseOperator::product(const SparseOperator& a, std::size_t b_cols, int threads,
                                       Pick&& pick) {
  SparseOperator out(a.rows(), b_cols);
  std::vector<std::vector<std::uint32_t>> cols(a.rows());
  std::vector<std::vector<double>> vals(a.rows());

  parallel_for(a.rows(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> accum(b_cols, 0.0);
    std::vector<char> seen(b_cols, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = begin; i < end; ++i) {
      const SparseOperator& b = pick(i);
      touched.clear();
      const auto acols = a.row_cols(i);
      const auto avals = a.row_values(i);
      for (std::size_t pa = 0; pa < acols.size(); ++pa) {
        const std::uint32_t k = acols[pa];
        const double av = avals[pa];
        const auto bcols = b.row_cols(k);
        const auto bvals = b.row_values(k);
        for (std::size_t pb = 0; pb < bcols.size(); ++pb) {
          const std::uint32_t j = bcols[pb];
          if (!seen[j]) {
            seen[j] = 1;
            touched.push_back(j);
          }
          accum[j] += av * bvals[pb];
        }
      }
      std::sort(touched.begin(), touched.end());
      cols[i].reserve(touched.size());
      vals[i].reserve(touched.size());
      for (std::uint32_t j : touched) {
        cols[i].push_back(j);
        vals[i].push_back(accum[j]);
        accum[j] = 0.0;
        seen[j] = 0;
      }
    }
  });

  out.row_ptr_.resize(a.rows() + 1);
  out.row_ptr_[0] = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    out.row_ptr_[i + 1] = out.row_ptr_[i] + cols[i].size();
  out.col_index_.resize(out.row_ptr_.back());
  out.values_.resize(out.row_ptr_.back());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(cols[i].begin(), cols[i].end(), out.col_index_.begin() + out.row_ptr_[i]);
    std::copy(vals[i].begin(), vals[i].end(), out.values_.begin() + out.row_ptr_[i]);
  }
  return out;
}

SparseOperator multiply(const SparseOperator& a, const SparseOperator& b, int threads) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("product dimension mismatch");
  return SparseOperator::product(a, b.cols(), threads,
                                 [&b](std::size_t) -> const SparseOperator& { return b; });
}

SparseOperator multiply_rowwise(const SparseOperator& a, const SparseOperator& b,
                                const SparseOperator& b_alt, std::span<const char> use_alt,
                                int threads) {
  if (a.cols_ != b.rows_ || b.rows_ != b_alt.rows_ || b.cols_ != b_alt.cols_ ||
      use_alt.size() != a.rows_)
    throw std::invalid_argument("rowwise product dimension mismatch");
  return SparseOperator::product(a, b.cols(), threads,
                                 [&](std::size_t i) -> const SparseOperator& {
                                   return use_alt[i] ? b_alt : b;
                                 });
}

void dump_operator(const SparseOperator& op, std::ostream& out) {
  out << op.rows() << ' ' << op.cols() << ' ' << op.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < op.rows(); ++i) {
    const auto cols = op.row_cols(i);
    const auto vals = op.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p)
      out << i << ' ' << cols[p] << ' ' << vals[p] << '\n';
  }
}

SparseOperator load_operator(std::istream& in) {
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) throw std::runtime_error("bad operator header");
  SparseOperator::RowBuilder builder(rows, cols);
  std::size_t current = 0;
  for (std::size_t e = 0; e < nnz; ++e) {
    std::size_t r = 0;
    std::uint32_t c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw std::runtime_error("bad operator entry");
    if (r < current) throw std::runtime_error("rows out of order in operator dump");
    while (current < r) {
      builder.commit_row();
      ++current;
    }
    builder.add(c, v);
  }
  while (current < rows) {
    builder.commit_row();
    ++current;
  }
  return builder.finish();
}

}  // namespace rpimc
