#include "stl/analytic.hpp"

#include <cmath>

namespace stl {

namespace {

std::size_t expected_param_count(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Constant:
    case FunctionKind::SphereTraceConstant:
      return 1;
    case FunctionKind::Linear:
    case FunctionKind::CosineProduct:
    case FunctionKind::SphereTraceFirstHarmonic:
      return 3;
  }
  throw std::logic_error("unknown function kind");
}

}  // namespace

void AnalyticFunction::validate() const {
  if (params.size() != expected_param_count(kind))
    throw std::invalid_argument("AnalyticFunction: wrong parameter count for " +
                                function_kind_name(kind));
}

double AnalyticFunction::eval(double x, double y) const {
  switch (kind) {
    case FunctionKind::Constant:
      return params[0];
    case FunctionKind::Linear:
      return params[0] + params[1] * x + params[2] * y;
    case FunctionKind::CosineProduct:
      return params[0] * std::cos(params[1] * x) * std::cos(params[2] * y);
    default:
      throw std::invalid_argument(
          "AnalyticFunction: sphere-trace function evaluated at a planar point");
  }
}

double AnalyticFunction::eval_angle(double theta) const {
  switch (kind) {
    case FunctionKind::SphereTraceConstant:
      return params[0];
    case FunctionKind::SphereTraceFirstHarmonic:
      return params[0] + params[1] * std::cos(theta) + params[2] * std::sin(theta);
    default:
      throw std::invalid_argument(
          "AnalyticFunction: planar function evaluated on the sphere");
  }
}

FunctionKind function_kind_from_name(const std::string& name) {
  if (name == "constant") return FunctionKind::Constant;
  if (name == "linear") return FunctionKind::Linear;
  if (name == "cosine_product") return FunctionKind::CosineProduct;
  if (name == "sphere_trace_constant") return FunctionKind::SphereTraceConstant;
  if (name == "sphere_trace_first_harmonic")
    return FunctionKind::SphereTraceFirstHarmonic;
  throw std::invalid_argument("unknown function kind: " + name);
}

std::string function_kind_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Constant:
      return "constant";
    case FunctionKind::Linear:
      return "linear";
    case FunctionKind::CosineProduct:
      return "cosine_product";
    case FunctionKind::SphereTraceConstant:
      return "sphere_trace_constant";
    case FunctionKind::SphereTraceFirstHarmonic:
      return "sphere_trace_first_harmonic";
  }
  throw std::logic_error("unknown function kind");
}

}  // namespace stl
