#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "drs/error.hpp"
#include "drs/rng.hpp"

namespace drs::nn {

using Mat = Eigen::MatrixXd;
using Span = std::pair<int, int>;  // column range: offset, length

// One learnable tensor plus its gradient and Adam state.
struct Param {
  std::string name;
  Mat value;
  Mat grad;
  Mat adam_m, adam_v;
  bool is_embedding = false;  // subject to max-norm column renorm

  Param() = default;
  Param(std::string n, int rows, int cols) : name(std::move(n)) {
    value = Mat::Zero(rows, cols);
    zero_grad();
  }

  void zero_grad() { grad = Mat::Zero(value.rows(), value.cols()); }
  void init_uniform(Rng& rng, double bound) {
    for (int c = 0; c < value.cols(); ++c)
      for (int r = 0; r < value.rows(); ++r) value(r, c) = rng.uniform(-bound, bound);
  }
  // Glorot-style bound from the tensor shape.
  void init_glorot(Rng& rng) {
    init_uniform(rng, std::sqrt(6.0 / double(value.rows() + value.cols())));
  }
};

struct Node {
  Mat value;
  Mat grad;  // empty until touched during backward
  bool requires_grad = false;
  Mat* external_grad = nullptr;  // set for parameter leaves
  std::function<void()> backward;

  Mat& grad_ref() {
    if (external_grad) return *external_grad;
    if (grad.size() == 0) grad = Mat::Zero(value.rows(), value.cols());
    return grad;
  }
  bool grad_touched() const {
    return external_grad != nullptr || grad.size() != 0;
  }
};

using Var = Node*;

inline const Mat& v(Var x) { return x->value; }

// Eagerly evaluated computation graph; values are computed at op creation,
// gradients on backward(). When recording is off only values are produced.
class Graph {
 public:
  explicit Graph(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }
  size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  Var input(Mat m);
  Var param(Param& p);

  Var matmul(Var a, Var b, bool trans_a = false, bool trans_b = false);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var add_broadcast_col(Var m, Var col);  // col added to every column of m
  Var cmul(Var a, Var b);                 // elementwise
  Var scale(Var a, double s);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var softmax_cols(Var a);
  Var mean_cols(Var a);  // (rows x 1)

  Var vstack(Var a, Var b);
  Var hstack(const std::vector<Var>& xs);
  Var slice_rows(Var a, int start, int n);
  Var slice_cols(Var a, int start, int n);
  // place source column j at target column index[j]; other columns zero
  Var scatter_cols(Var src, const std::vector<int>& index, int total_cols);

  // columns of `table` gathered by id
  Var lookup(Param& table, const std::vector<int>& ids);

  // out col j = (mask[j] != 0) ? a col j : b col j
  Var select_cols(Var a, Var b, std::vector<char> mask);

  // per span (over columns of a): rowwise max -> one output column per span
  Var segment_max(Var a, std::vector<Span> spans);
  // per span: mean of columns
  Var segment_mean(Var a, std::vector<Span> spans);

  // sliding window stack: for span s and window w, output columns are the
  // vertical concatenation of w consecutive input columns
  Var ngram_stack(Var a, std::vector<Span> spans, int width,
                  std::vector<Span>* out_spans = nullptr);

  // queries (d x B) against packed per-example states (d x sum L_b);
  // returns contexts (d x B), optionally exposing the attention weights
  Var attend_packed(Var states, std::vector<Span> spans, Var queries,
                    std::vector<Eigen::VectorXd>* weights_out = nullptr);

  // summed cross entropy of softmax(logits) against target ids over the
  // unmasked columns; optional label smoothing
  Var masked_cross_entropy(Var logits, std::vector<int> targets, std::vector<char> mask,
                           double label_smoothing = 0.0);

  void backward(Var loss);

 private:
  Var make(Mat value, bool requires_grad);

  std::vector<std::unique_ptr<Node>> nodes_;
  bool recording_;
};

// Numerically stable column softmax (value-level helper, shared with beam search).
Eigen::VectorXd softmax_vec(const Eigen::VectorXd& logits);
Eigen::VectorXd log_softmax_vec(const Eigen::VectorXd& logits);

}  // namespace drs::nn
