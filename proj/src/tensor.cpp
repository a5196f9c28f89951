#include "acrn/tensor.hpp"

#include <cmath>
#include <sstream>

namespace acrn {

std::string Shape::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    os << dims[i];
  }
  os << "]";
  return os.str();
}

void shape_error(const std::string& op, const std::string& detail) {
  throw std::invalid_argument(op + ": " + detail);
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)) {
  if (static_cast<i64>(values.size()) != shape_.numel())
    shape_error("Tensor", "data length " + std::to_string(values.size()) +
                              " does not match shape " + shape_.str());
  data_ = std::make_shared<std::vector<double>>(std::move(values));
}

Tensor Tensor::full(Shape shape, double v) {
  i64 n = shape.numel();
  return Tensor(std::move(shape), std::vector<double>(static_cast<size_t>(n), v));
}

double Tensor::item() const {
  if (numel() != 1) shape_error("item", "tensor has " + std::to_string(numel()) + " elements");
  return (*data_)[0];
}

const std::vector<double>* Tensor::grad() const {
  if (!tape_) return nullptr;
  return tape_->grad_if(node_);
}

Tensor Tape::leaf(const Tensor& value) {
  Tensor t = value;  // shares data
  t.tape_ = this;
  t.node_ = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{value.shape(), nullptr, nullptr});
  return t;
}

Tensor Tape::emit(Shape shape, std::vector<double> values, BackwardFn back) {
  Tensor t(std::move(shape), std::move(values));
  t.tape_ = this;
  t.node_ = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{t.shape(), std::move(back), nullptr});
  return t;
}

std::vector<double>& Tape::grad(int node) {
  Node& n = nodes_[static_cast<size_t>(node)];
  if (!n.grad)
    n.grad = std::make_shared<std::vector<double>>(static_cast<size_t>(n.shape.numel()), 0.0);
  return *n.grad;
}

const std::vector<double>* Tape::grad_if(int node) const {
  const Node& n = nodes_[static_cast<size_t>(node)];
  return n.grad ? n.grad.get() : nullptr;
}

void Tape::backward(const Tensor& loss) {
  if (loss.tape() != this) shape_error("backward", "loss is not on this tape");
  if (loss.numel() != 1) shape_error("backward", "loss must be scalar, got " + loss.shape().str());
  grad(loss.node())[0] += 1.0;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (n.back && n.grad) n.back(*this, i);
  }
}

Parameter& ParameterStore::get_or_create(const std::string& name, const Shape& shape, Init init) {
  auto it = params_.find(name);
  if (it != params_.end()) {
    if (!(it->second.value.shape() == shape))
      shape_error("parameter '" + name + "'",
                  "shape " + it->second.value.shape().str() + " requested as " + shape.str());
    return it->second;
  }
  Tensor v(shape);
  if (init == Init::HeNormal) {
    // fan_in = numel / out_channels; leading dim is the output dim for every
    // weight layout used here.
    double fan_in = shape.rank() > 0 ? static_cast<double>(shape.numel() / shape[0]) : 1.0;
    double std_dev = std::sqrt(2.0 / fan_in);
    for (i64 i = 0; i < v.numel(); ++i) v.data()[i] = init_rng_.normal() * std_dev;
  }
  order_.push_back(name);
  auto& p = params_[name];
  p = Parameter{name, std::move(v), true};
  return p;
}

Parameter& ParameterStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::runtime_error("unknown parameter '" + name + "'");
  return it->second;
}

const Parameter& ParameterStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::runtime_error("unknown parameter '" + name + "'");
  return it->second;
}

Parameter& ParameterStore::insert(const std::string& name, Tensor value) {
  if (params_.count(name)) throw std::runtime_error("duplicate parameter '" + name + "'");
  order_.push_back(name);
  auto& p = params_[name];
  p = Parameter{name, std::move(value), true};
  return p;
}

Tensor Bound::operator()(const std::string& name, const Shape& shape, Init init) {
  Parameter& p = store_->get_or_create(name, shape, init);
  if (!tape_) return p.value;
  auto it = node_of_.find(name);
  if (it != node_of_.end()) {
    Tensor t = p.value;
    t.tape_ = tape_;
    t.node_ = it->second;
    return t;
  }
  Tensor t = tape_->leaf(p.value);
  node_of_[name] = t.node();
  order_.emplace_back(name, t.node());
  return t;
}

const std::vector<double>* Bound::grad(const std::string& name) const {
  if (!tape_) return nullptr;
  auto it = node_of_.find(name);
  if (it == node_of_.end()) return nullptr;
  return tape_->grad_if(it->second);
}

}  // namespace acrn
