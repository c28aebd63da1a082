#include "nlsob/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "nlsob/params.hpp"
#include "quadrature.hpp"

namespace nlsob {

namespace {

constexpr int kStencil = 7;   // differentiation stencil width
constexpr int kInterp = 6;    // interpolation stencil width

// Derivative weights in unit log step for each of the 7 evaluation positions
// inside a 7-point stencil (position 3 is the centered one).
const std::array<std::array<double, kStencil>, kStencil>& diff_weights() {
  static const auto table = [] {
    std::array<std::array<double, kStencil>, kStencil> t{};
    std::array<double, kStencil> x{};
    for (int j = 0; j < kStencil; ++j) x[j] = j;
    for (int z = 0; z < kStencil; ++z) {
      const auto w = detail::fornberg_weights(z, x, 1);
      for (int j = 0; j < kStencil; ++j) t[z][j] = w[1][j];
    }
    return t;
  }();
  return table;
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (!a.grid().same_as(b.grid())) throw ValidationError("fields live on different grids");
}

double tail_min(double a, double b) { return std::min(a, b); }

// int_{r_max}^inf f r^{k-1} dr for the declared power-law tail. The model
// last (r/R)^{-tau} (1 + b((R/r)^2 - 1)) is fitted through the node nearest
// R/2 and the correction kept when small; fields analytic in r^2 then close
// to next order.
double tail_moment(const RadialField& f, double k) {
  const auto& g = f.grid();
  const double tau = f.tail_exponent();
  const double R = g.r_max();
  const double last = f.values().back();
  const double lead = last * std::pow(R, k) / (tau - k);
  const int back = static_cast<int>(std::lround(std::log(2.0) / g.log_step()));
  const int j = f.size() - 1 - back;
  if (back < 1 || j < 0) return lead;
  const double t = g.node(j) / R;
  const double ratio = f.value(j) / (last * std::pow(t, -tau));
  const double b = (ratio - 1.0) / (1.0 / (t * t) - 1.0);
  if (!std::isfinite(b) || std::abs(b) > 0.1) return lead;
  return last * std::pow(R, k) * ((1.0 - b) / (tau - k) + b / (tau + 2.0 - k));
}

}  // namespace

RadialGrid RadialGrid::from_nodes(std::vector<double> nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n < 16) throw ValidationError("grid needs at least 16 nodes");
  if (!(nodes.front() > 0.0)) throw ValidationError("grid nodes must be positive");
  for (int i = 1; i < n; ++i)
    if (!(nodes[i] > nodes[i - 1])) throw ValidationError("grid nodes must be strictly increasing");
  const double x0 = std::log(nodes.front());
  const double h = (std::log(nodes.back()) - x0) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double expect = x0 + i * h;
    if (std::abs(std::log(nodes[i]) - expect) > 1e-9 * std::max(1.0, h * n))
      throw ValidationError("grid nodes are not log-uniform");
  }
  auto d = std::make_shared<Data>();
  d->nodes = std::move(nodes);
  d->x0 = x0;
  d->h = h;
  d->wx = detail::gregory_weights(n);
  for (double& w : d->wx) w *= h;
  RadialGrid g;
  g.data_ = std::move(d);
  return g;
}

std::vector<double> RadialGrid::weights(double k) const {
  std::vector<double> w(data_->wx);
  for (int i = 0; i < size(); ++i) w[i] *= std::pow(data_->nodes[i], k);
  return w;
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  if (data_ == other.data_) return true;
  if (!data_ || !other.data_) return false;
  return data_->nodes == other.data_->nodes;
}

RadialGrid make_log_grid(double r_min, double r_max, int n) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw ValidationError("grid requires 0 < r_min < r_max");
  if (n < 16) throw ValidationError("grid requires n >= 16");
  const double x0 = std::log(r_min);
  const double h = (std::log(r_max) - x0) / (n - 1);
  std::vector<double> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = std::exp(x0 + i * h);
  nodes.front() = r_min;
  nodes.back() = r_max;
  return RadialGrid::from_nodes(std::move(nodes));
}

RadialField::RadialField(RadialGrid grid, std::vector<double> values, double tail_exponent,
                         double head_value)
    : grid_(std::move(grid)), values_(std::move(values)), tail_(tail_exponent), head_(head_value) {
  if (!grid_.valid()) throw ValidationError("field requires a grid");
  if (static_cast<int>(values_.size()) != grid_.size())
    throw ValidationError("field size does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("field values must be finite");
  if (std::isnan(tail_) || !std::isfinite(head_)) throw ValidationError("bad head/tail metadata");
}

double RadialField::at(double r) const {
  const int n = size();
  if (r <= grid_.r_min()) return r == grid_.r_min() ? values_.front() : head_;
  if (r >= grid_.r_max()) {
    if (r == grid_.r_max()) return values_.back();
    if (std::isinf(tail_)) return 0.0;
    return values_.back() * std::pow(r / grid_.r_max(), -tail_);
  }
  const double t = (std::log(r) - grid_.log_min()) / grid_.log_step();
  const int i = static_cast<int>(std::floor(t));
  const int s = std::clamp(i - kInterp / 2 + 1, 0, n - kInterp);
  std::array<double, kInterp> x{};
  for (int j = 0; j < kInterp; ++j) x[j] = s + j;
  const auto w = detail::fornberg_weights(t, x, 0);
  double acc = 0.0;
  for (int j = 0; j < kInterp; ++j) acc += w[0][j] * values_[s + j];
  return acc;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : values_) v *= s;
  head_ *= s;
  return *this;
}

RadialField& RadialField::operator+=(const RadialField& o) {
  require_same_grid(*this, o);
  for (int i = 0; i < size(); ++i) values_[i] += o.values_[i];
  head_ += o.head_;
  tail_ = tail_min(tail_, o.tail_);
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& o) {
  require_same_grid(*this, o);
  for (int i = 0; i < size(); ++i) values_[i] -= o.values_[i];
  head_ -= o.head_;
  tail_ = tail_min(tail_, o.tail_);
  return *this;
}

RadialField operator*(double s, RadialField f) { return f *= s; }
RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }

RadialField sample(const RadialGrid& grid, const std::function<double(double)>& fn,
                   double tail_exponent, double head_value) {
  std::vector<double> v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
  return {grid, std::move(v), tail_exponent, head_value};
}

RadialField product(const RadialField& a, const RadialField& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a.value(i) * b.value(i);
  return {a.grid(), std::move(v), a.tail_exponent() + b.tail_exponent(),
          a.head_value() * b.head_value()};
}

RadialField abs_power(const RadialField& u, double p) {
  std::vector<double> v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = std::pow(std::abs(u.value(i)), p);
  return {u.grid(), std::move(v), u.tail_exponent() * p, std::pow(std::abs(u.head_value()), p)};
}

RadialField signed_power(const RadialField& u, double p) {
  auto sp = [p](double x) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), p), x); };
  std::vector<double> v(u.size());
  for (int i = 0; i < u.size(); ++i) v[i] = sp(u.value(i));
  return {u.grid(), std::move(v), u.tail_exponent() * p, sp(u.head_value())};
}

double radial_moment(const RadialField& f, double k) {
  const auto& g = f.grid();
  const auto& wx = g.log_weights();
  double acc = 0.0;
  for (int i = 0; i < f.size(); ++i) acc += wx[i] * f.value(i) * std::pow(g.node(i), k);
  if (f.head_value() != 0.0) {
    if (!(k > 0.0)) throw ValidationError("integral diverges at the origin");
    acc += f.head_value() * std::pow(g.r_min(), k) / k;
  }
  const double last = f.values().back();
  const double tau = f.tail_exponent();
  if (last != 0.0 && !std::isinf(tau)) {
    if (!(tau > k))
      throw ValidationError("non-integrable tail: exponent " + std::to_string(tau) +
                            " <= moment order " + std::to_string(k));
    acc += tail_moment(f, k);
  }
  return acc;
}

double integrate(const RadialField& f, int N) { return sphere_area(N) * radial_moment(f, N); }

RadialField differentiate(const RadialField& f) {
  const int n = f.size();
  if (n < kStencil) throw ValidationError("differentiate needs at least 7 nodes");
  const auto& W = diff_weights();
  const auto& g = f.grid();
  const double h = g.log_step();
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    const int s = std::clamp(i - kStencil / 2, 0, n - kStencil);
    const auto& w = W[i - s];
    double acc = 0.0;
    for (int j = 0; j < kStencil; ++j) acc += w[j] * f.value(s + j);
    d[i] = acc / (h * g.node(i));
  }
  const double head = d.front();
  return {g, std::move(d), f.tail_exponent() + 1.0, head};
}

double h1_inner(const RadialField& u, const RadialField& v, int ell, int N) {
  require_same_grid(u, v);
  if (ell < 0) throw ValidationError("ell must be nonnegative");
  double acc = radial_moment(product(differentiate(u), differentiate(v)), N);
  if (ell > 0) acc += ell * (ell + N - 2.0) * radial_moment(product(u, v), N - 2);
  return sphere_area(N) * acc;
}

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_csv(const RadialField& f, std::ostream& os) {
  os << "r,value\n";
  for (int i = 0; i < f.size(); ++i) os << fmt17(f.grid().node(i)) << ',' << fmt17(f.value(i)) << '\n';
  os << "#tail_exponent=" << fmt17(f.tail_exponent()) << '\n';
  os << "#head_value=" << fmt17(f.head_value()) << '\n';
}

void write_csv(const RadialField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  write_csv(f, os);
}

RadialField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty field file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,value") throw ValidationError("field file must start with header r,value");
  std::vector<double> r;
  std::vector<double> v;
  double tail = std::numeric_limits<double>::quiet_NaN();
  double head = std::numeric_limits<double>::quiet_NaN();
  auto parse = [](const std::string& s) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ValidationError("bad number '" + s + "'");
    return x;
  };
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ValidationError("bad metadata line '" + line + "'");
      const std::string key = line.substr(1, eq - 1);
      const double val = parse(line.substr(eq + 1));
      if (key == "tail_exponent") tail = val;
      else if (key == "head_value") head = val;
      else throw ValidationError("unknown metadata key '" + key + "'");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("bad row '" + line + "'");
    r.push_back(parse(line.substr(0, comma)));
    v.push_back(parse(line.substr(comma + 1)));
  }
  if (std::isnan(tail) || std::isnan(head)) throw ValidationError("missing tail/head metadata");
  return {RadialGrid::from_nodes(std::move(r)), std::move(v), tail, head};
}

RadialField read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  return read_csv(is);
}

}  // namespace nlsob
