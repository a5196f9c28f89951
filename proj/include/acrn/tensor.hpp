#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "acrn/rng.hpp"

namespace acrn {

using i64 = std::int64_t;

struct Shape {
  std::vector<int> dims;

  Shape() = default;
  Shape(std::initializer_list<int> d) : dims(d) {}
  explicit Shape(std::vector<int> d) : dims(std::move(d)) {}

  i64 numel() const {
    i64 n = 1;
    for (int d : dims) n *= d;
    return n;
  }
  int rank() const { return static_cast<int>(dims.size()); }
  int operator[](int i) const { return dims[static_cast<size_t>(i)]; }
  bool operator==(const Shape& o) const { return dims == o.dims; }
  std::string str() const;
};

class Tape;

// Dense row-major f64 tensor. Copies share the underlying buffer; ops never
// mutate their inputs, so sharing is safe. A tensor produced by an op on a
// tape carries that tape's node id and must not be mixed with a second tape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape)
      : shape_(std::move(shape)),
        data_(std::make_shared<std::vector<double>>(
            static_cast<size_t>(shape_.numel()), 0.0)) {}
  Tensor(Shape shape, std::vector<double> values);
  static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }
  static Tensor full(Shape shape, double v);

  const Shape& shape() const { return shape_; }
  i64 numel() const { return shape_.numel(); }
  double* data() { return data_->data(); }
  const double* data() const { return data_->data(); }
  const std::shared_ptr<std::vector<double>>& buffer() const { return data_; }
  double item() const;

  Tape* tape() const { return tape_; }
  int node() const { return node_; }
  bool on_tape() const { return tape_ != nullptr; }
  // Gradient buffer filled by Tape::backward; null before that or off-tape.
  const std::vector<double>* grad() const;

 private:
  friend class Tape;
  friend class Bound;
  Shape shape_;
  std::shared_ptr<std::vector<double>> data_;
  Tape* tape_ = nullptr;
  int node_ = -1;
};

// Reverse-mode tape. Nodes are appended in forward (topological) order;
// backward walks them once in reverse. Single-threaded by contract.
class Tape {
 public:
  // Receives the tape and the node's own id; reads grad_if(self) and
  // accumulates into grad(parent) for each parent it touches.
  using BackwardFn = std::function<void(Tape&, int)>;

  // Registers an existing value (parameter or input) as a leaf.
  Tensor leaf(const Tensor& value);
  // Records an op output.
  Tensor emit(Shape shape, std::vector<double> values, BackwardFn back);

  std::vector<double>& grad(int node);  // zero-filled on first touch
  const std::vector<double>* grad_if(int node) const;

  // Seeds d(loss)/d(loss)=1 and propagates. loss must be a scalar on this
  // tape. Deterministic: fixed reverse order, one visit per node.
  void backward(const Tensor& loss);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Shape shape;
    BackwardFn back;
    std::shared_ptr<std::vector<double>> grad;
  };
  std::vector<Node> nodes_;
};

// Named model weight.
struct Parameter {
  std::string name;
  Tensor value;
  bool learnable = true;
};

enum class Init { Zero, HeNormal };

// Owns all parameters of a model, keyed by unique name, in creation order.
// Initialization draws from a dedicated rng so parameter values depend only
// on the seed and the creation order.
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t seed) : init_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  Parameter& get_or_create(const std::string& name, const Shape& shape, Init init);
  bool has(const std::string& name) const { return params_.count(name) > 0; }
  Parameter& at(const std::string& name);
  const Parameter& at(const std::string& name) const;
  // Creates a parameter directly (checkpoint loading).
  Parameter& insert(const std::string& name, Tensor value);
  const std::vector<std::string>& names() const { return order_; }
  size_t size() const { return order_.size(); }

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, Parameter> params_;
  Rng init_rng_;
};

// Per-step view of a store bound to one tape. operator() fetches (creating if
// needed) a parameter and watches it on the tape once; with a null tape it
// returns the raw value (inference path).
class Bound {
 public:
  Bound(Tape* tape, ParameterStore& store) : tape_(tape), store_(&store) {}

  Tensor operator()(const std::string& name, const Shape& shape, Init init);
  const std::vector<double>* grad(const std::string& name) const;
  const std::vector<std::pair<std::string, int>>& watched() const { return order_; }
  ParameterStore& store() { return *store_; }
  Tape* tape() { return tape_; }

 private:
  Tape* tape_;
  ParameterStore* store_;
  std::unordered_map<std::string, int> node_of_;
  std::vector<std::pair<std::string, int>> order_;
};

[[noreturn]] void shape_error(const std::string& op, const std::string& detail);

}  // namespace acrn
