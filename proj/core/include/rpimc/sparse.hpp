// Row-compressed sparse operator with sorted column indices. Assembly goes
// through per-row sorted merge buffers so the stored layout is deterministic.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rpimc/parallel.hpp"

namespace rpimc {

class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t i) const {
    return {col_index_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<double> row_values(std::size_t i) {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  double diagonal(std::size_t i) const;
  double coeff(std::size_t i, std::size_t j) const;

  // y = A x; rows may be partitioned across threads (each row is summed
  // sequentially, so the result is independent of the thread count).
  void multiply(std::span<const double> x, std::span<double> y, int threads = 1) const;

  // Builder interface: rows are appended in order. Entries of one row are
  // merged (duplicates accumulated) and sorted by column. Throws on
  // non-finite values when the row is committed.
  class RowBuilder;

  // Parallel assembly: fill(i, out) appends (col, value) pairs for row i.
  template <class Fill>
  static SparseOperator assemble_rows(std::size_t rows, std::size_t cols, int threads,
                                      Fill&& fill);

  friend SparseOperator multiply(const SparseOperator& a, const SparseOperator& b, int threads);
  friend SparseOperator multiply_rowwise(const SparseOperator& a, const SparseOperator& b,
                                         const SparseOperator& b_alt,
                                         std::span<const char> use_alt, int threads);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_index_;
  std::vector<double> values_;

  static void merge_sorted(std::vector<std::pair<std::uint32_t, double>>& entries);

  template <class Pick>
  static SparseOperator product(const SparseOperator& a, std::size_t b_cols, int threads,
                                Pick&& pick);
};

class SparseOperator::RowBuilder {
 public:
  RowBuilder(std::size_t rows, std::size_t cols) : op_(rows, cols) {
    op_.row_ptr_.assign(1, 0);
  }
  void add(std::uint32_t col, double value) { entries_.emplace_back(col, value); }
  void commit_row();
  SparseOperator finish();

 private:
  SparseOperator op_;
  std::vector<std::pair<std::uint32_t, double>> entries_;
};

// Sparse product a*b with per-row dense accumulators; deterministic layout.
SparseOperator multiply(const SparseOperator& a, const SparseOperator& b, int threads = 1);

// Row i of the result is a.row(i) * (use_alt[i] ? b_alt : b). b and b_alt
// must share dimensions.
SparseOperator multiply_rowwise(const SparseOperator& a, const SparseOperator& b,
                                const SparseOperator& b_alt, std::span<const char> use_alt,
                                int threads = 1);

template <class Fill>
SparseOperator SparseOperator::assemble_rows(std::size_t rows, std::size_t cols, int threads,
                                             Fill&& fill) {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> row_entries(rows);
  parallel_for(rows, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fill(i, row_entries[i]);
  });
  RowBuilder builder(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (const auto& [c, v] : row_entries[i]) builder.add(c, v);
    builder.commit_row();
  }
  return builder.finish();
}

// Text dump: header "rows cols nnz", then one "row col value" triple per
// line with round-trip precision.
void dump_operator(const SparseOperator& op, std::ostream& out);
SparseOperator load_operator(std::istream& in);

}  // namespace rpimc
