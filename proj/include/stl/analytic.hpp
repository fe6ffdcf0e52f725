#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stl {

/// Closed-form function catalog used for f, g, h and zeta. Planar kinds are
/// evaluated at (x, y); sphere-trace kinds at a unit-circle angle.
enum class FunctionKind {
  Constant,                 // params: {c};           f(x,y) = c
  Linear,                   // params: {a, b, c};     f(x,y) = a + b x + c y
  CosineProduct,            // params: {A, wx, wy};   f(x,y) = A cos(wx x) cos(wy y)
  SphereTraceConstant,      // params: {c};           h(m) = c
  SphereTraceFirstHarmonic  // params: {c0, ac, as};  h(m) = c0 + ac m1 + as m2
};

struct AnalyticFunction {
  FunctionKind kind = FunctionKind::Constant;
  std::vector<double> params{0.0};

  static AnalyticFunction constant(double c) {
    return {FunctionKind::Constant, {c}};
  }
  static AnalyticFunction linear(double a, double b, double c) {
    return {FunctionKind::Linear, {a, b, c}};
  }
  static AnalyticFunction cosine_product(double amp, double wx, double wy) {
    return {FunctionKind::CosineProduct, {amp, wx, wy}};
  }
  static AnalyticFunction sphere_constant(double c) {
    return {FunctionKind::SphereTraceConstant, {c}};
  }
  static AnalyticFunction sphere_first_harmonic(double c0, double ac,
                                                double as) {
    return {FunctionKind::SphereTraceFirstHarmonic, {c0, ac, as}};
  }

  bool is_planar() const {
    return kind == FunctionKind::Constant || kind == FunctionKind::Linear ||
           kind == FunctionKind::CosineProduct;
  }
  bool is_sphere_trace() const { return !is_planar(); }
  bool is_constant() const {
    return kind == FunctionKind::Constant ||
           kind == FunctionKind::SphereTraceConstant;
  }

  void validate() const;

  /// Planar evaluation; throws for sphere-trace kinds.
  double eval(double x, double y) const;

  /// Evaluation at angle theta on the unit circle (m = (cos, sin)); throws
  /// for planar kinds.
  double eval_angle(double theta) const;
};

FunctionKind function_kind_from_name(const std::string& name);
std::string function_kind_name(FunctionKind kind);

}  // namespace stl
