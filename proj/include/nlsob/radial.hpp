#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace nlsob {

/// Log-uniform radial grid. Quadrature is the Gregory-corrected trapezoid
/// rule in x = log r; weights(N) folds in the Jacobian so that
/// sum_i w_i f(r_i) ~ int_{r_min}^{r_max} f(r) r^{N-1} dr.
class RadialGrid {
 public:
  RadialGrid() = default;

  /// Build from explicit nodes (must be log-uniform to 1e-9 relative).
  static RadialGrid from_nodes(std::vector<double> nodes);

  int size() const { return static_cast<int>(data_->nodes.size()); }
  double r_min() const { return data_->nodes.front(); }
  double r_max() const { return data_->nodes.back(); }
  double log_step() const { return data_->h; }
  double log_min() const { return data_->x0; }
  const std::vector<double>& nodes() const { return data_->nodes; }
  double node(int i) const { return data_->nodes[i]; }

  /// Weights in the log variable (step included, no Jacobian).
  const std::vector<double>& log_weights() const { return data_->wx; }
  /// Weights for int f(r) r^{k-1} dr over [r_min, r_max].
  std::vector<double> weights(double k) const;

  bool same_as(const RadialGrid& other) const;
  bool valid() const { return static_cast<bool>(data_); }

 private:
  struct Data {
    std::vector<double> nodes;
    std::vector<double> wx;
    double x0 = 0.0;
    double h = 0.0;
  };
  std::shared_ptr<const Data> data_;
};

RadialGrid make_log_grid(double r_min, double r_max, int n);

inline constexpr double kDefaultRMin = 1e-3;
inline constexpr double kDefaultRMax = 1e3;
inline constexpr int kDefaultGridN = 2048;

/// Radial function on a grid. Below r_min it equals head_value; above r_max
/// it follows values.back() * (r / r_max)^(-tail_exponent). An infinite tail
/// exponent means the field vanishes beyond r_max.
class RadialField {
 public:
  RadialField() = default;
  RadialField(RadialGrid grid, std::vector<double> values, double tail_exponent, double head_value);

  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }
  double tail_exponent() const { return tail_; }
  double head_value() const { return head_; }

  /// Sixth-order Lagrange interpolation in log r plus head/tail models.
  double at(double r) const;

  RadialField& operator*=(double s);
  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  double tail_ = 0.0;
  double head_ = 0.0;
};

RadialField operator*(double s, RadialField f);
RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);

RadialField sample(const RadialGrid& grid, const std::function<double(double)>& fn,
                   double tail_exponent, double head_value);

/// Pointwise product; tail exponents add.
RadialField product(const RadialField& a, const RadialField& b);
/// |u|^p; tail exponent scales by p.
RadialField abs_power(const RadialField& u, double p);
/// |u|^(p-1) u; tail exponent scales by p.
RadialField signed_power(const RadialField& u, double p);

/// int_0^inf f(r) r^{k-1} dr with head and tail closed in form.
double radial_moment(const RadialField& f, double k);

/// omega_{N-1} int_0^inf f(r) r^{N-1} dr.
double integrate(const RadialField& f, int N);

RadialField differentiate(const RadialField& f);

/// Dirichlet form of the degree-ell mode g(r) Y_ell.
double h1_inner(const RadialField& u, const RadialField& v, int ell, int N);

void write_csv(const RadialField& f, std::ostream& os);
void write_csv(const RadialField& f, const std::string& path);
RadialField read_csv(std::istream& is);
RadialField read_csv(const std::string& path);

}  // namespace nlsob
