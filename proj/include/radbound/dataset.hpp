#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "radbound/covariance.hpp"
#include "radbound/errors.hpp"
#include "radbound/matrix.hpp"

namespace radbound {

// A multitask sample: T tasks with n points each in R^d. Single-task data is
// the T = 1 case.
class MultitaskDataset {
 public:
  MultitaskDataset() = default;

  explicit MultitaskDataset(std::vector<Matrix> tasks) : tasks_(std::move(tasks)) {
    if (tasks_.empty()) throw invalid_input("dataset: no tasks");
    const std::size_t n = tasks_.front().rows(), d = tasks_.front().cols();
    if (n == 0 || d == 0) throw invalid_input("dataset: empty task");
    for (const Matrix& t : tasks_) {
      if (t.rows() != n || t.cols() != d)
        throw invalid_input("dataset: tasks must share the same sample count and dimension");
      require_finite(t, "dataset");
    }
  }

  static MultitaskDataset single(Matrix data) {
    std::vector<Matrix> t;
    t.push_back(std::move(data));
    return MultitaskDataset(std::move(t));
  }

  std::size_t task_count() const { return tasks_.size(); }
  std::size_t points_per_task() const { return tasks_.front().rows(); }
  std::size_t dimension() const { return tasks_.front().cols(); }
  std::size_t total_points() const { return task_count() * points_per_task(); }

  const Matrix& task(std::size_t t) const { return tasks_[t]; }
  const std::vector<Matrix>& tasks() const { return tasks_; }

  // All tasks stacked into one (T*n)-by-d matrix.
  [[nodiscard]] Matrix pooled() const {
    Matrix out(total_points(), dimension());
    std::size_t r = 0;
    for (const Matrix& t : tasks_)
      for (std::size_t i = 0; i < t.rows(); ++i, ++r)
        for (std::size_t j = 0; j < t.cols(); ++j) out(r, j) = t(i, j);
    return out;
  }

  // Column-centers every task independently.
  [[nodiscard]] MultitaskDataset centered() const {
    std::vector<Matrix> out;
    out.reserve(tasks_.size());
    for (const Matrix& t : tasks_) out.push_back(center(t));
    return MultitaskDataset(std::move(out));
  }

 private:
  std::vector<Matrix> tasks_;
};

}  // namespace radbound
