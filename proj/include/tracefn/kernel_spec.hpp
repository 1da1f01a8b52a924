#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tracefn/trace_zoo.hpp"

namespace tracefn {

/// Parsed kernel description:
///   trivial | additive:a | mult:order | legendre | kloosterman:m
///   | pullback(<kernel>,<num>/<den>) | prod(<k1>,<k2>)
/// Polynomials are written in x with integer coefficients, e.g. "x^2+3x-1".
class KernelSpec {
 public:
  /// Throws ConfigError on syntax errors.
  static KernelSpec parse(const std::string& text);

  const std::string& text() const { return text_; }
  /// Builds the table over the given field (DomainError on bad parameters).
  TraceFunction build(const PrimeField& field) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace tracefn
