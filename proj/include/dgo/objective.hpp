#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgo/bitcodec.hpp"

namespace dgo {

/// A box-bounded scalar function to minimize. The callable must be pure and
/// reentrant: batches may evaluate it from several threads at once.
class Objective {
 public:
  using Function = std::function<double(std::span<const double>)>;

  Objective(std::string name, std::vector<Bounds> bounds, Function fn)
      : name_(std::move(name)), bounds_(std::move(bounds)), fn_(std::move(fn)) {
    if (bounds_.empty()) throw std::invalid_argument("Objective '" + name_ + "': no dimensions");
    if (!fn_) throw std::invalid_argument("Objective '" + name_ + "': empty function");
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t dims() const noexcept { return bounds_.size(); }
  const std::vector<Bounds>& bounds() const noexcept { return bounds_; }

  double operator()(std::span<const double> x) const { return fn_(x); }

 private:
  std::string name_;
  std::vector<Bounds> bounds_;
  Function fn_;
};

/// NaN and infinities become +inf so they are never selected.
inline double sanitize_value(double v) noexcept {
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace dgo
