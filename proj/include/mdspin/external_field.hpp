#pragma once

#include <functional>
#include <string>
#include <variant>

#include "mdspin/core_model.hpp"

namespace mdspin {

// Uniform external field (0, -sin(theta), cos(theta)) * b_ext, switched on
// linearly over tau.
class HomogeneousField {
public:
  HomogeneousField(double b_ext, double theta, double tau);

  double b_ext() const { return b_ext_; }
  double theta() const { return theta_; }
  double tau() const { return tau_; }
  Vec3 vector() const;

private:
  double b_ext_;
  double theta_;
  double tau_;
};

// Field amplitude varying along z. The gradient is supplied explicitly and is
// checked against central differences of the profile on construction.
class InhomogeneousField {
public:
  using Profile = std::function<double(double)>;

  InhomogeneousField(Profile profile, Profile gradient, double tau, double z_min, double z_max,
                     std::string description = "custom");

  // B_E(z) = b0 + g z
  static InhomogeneousField affine(double b0, double g, double z_min, double z_max, double tau = 1.0);
  // B_E(z) = b0 + g z + q z^2
  static InhomogeneousField quadratic(double b0, double g, double q, double z_min, double z_max,
                                      double tau = 1.0);
  // B_E(z) = sqrt(b0^2 + 2 f z), so that B_E dB_E/dz = f everywhere.
  static InhomogeneousField constant_force(double b0, double f, double z_min, double z_max,
                                           double tau = 1.0);

  // Throws RangeError outside [z_min, z_max].
  double amplitude(double z) const;
  double gradient(double z) const;

  bool contains(double z) const { return z >= z_min_ && z <= z_max_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  double tau() const { return tau_; }
  const std::string& description() const { return description_; }

  // Same field with the whole profile multiplied by s.
  InhomogeneousField scaled(double s) const;

private:
  void check_range(double z) const;
  void check_gradient() const;

  Profile profile_;
  Profile gradient_;
  double tau_;
  double z_min_;
  double z_max_;
  std::string description_;
};

using ExternalField = std::variant<HomogeneousField, InhomogeneousField>;

}  // namespace mdspin
