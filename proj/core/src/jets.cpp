#include "twistorlab/jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace twistorlab {
namespace detail {
namespace {

uint64_t pack(std::span<const uint8_t> alpha) {
  uint64_t key = 0;
  for (uint8_t a : alpha) key = key << 8 | a;
  return key;
}

// All multi-indices of |alpha| == grade over dim variables, lexicographic
// descending in the first variable so ordering is reproducible.
void enumerate_grade(int dim, int grade, std::vector<uint8_t>& cur,
                     std::vector<std::vector<uint8_t>>& out) {
  if (cur.size() + 1 == static_cast<size_t>(dim)) {
    cur.push_back(static_cast<uint8_t>(grade));
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = grade; a >= 0; --a) {
    cur.push_back(static_cast<uint8_t>(a));
    enumerate_grade(dim, grade - a, cur, out);
    cur.pop_back();
  }
}

JetTables build_tables(int dim, int order) {
  JetTables t;
  t.dim = dim;
  t.order = order;

  std::vector<std::vector<uint8_t>> rows;
  for (int grade = 0; grade <= order; ++grade) {
    std::vector<uint8_t> cur;
    enumerate_grade(dim, grade, cur, rows);
  }
  t.size = static_cast<int>(rows.size());
  t.exponents.reserve(t.size * dim);
  t.degree.reserve(t.size);
  std::unordered_map<uint64_t, int> lookup;
  lookup.reserve(t.size * 2);
  for (int k = 0; k < t.size; ++k) {
    int deg = 0;
    for (uint8_t a : rows[k]) deg += a;
    t.degree.push_back(deg);
    t.exponents.insert(t.exponents.end(), rows[k].begin(), rows[k].end());
    lookup.emplace(pack(rows[k]), k);
  }

  t.product.resize(t.size);
  for (int i = 0; i < t.size; ++i) {
    for (int j = 0; j < t.size; ++j) {
      if (t.degree[i] + t.degree[j] > order) continue;
      std::vector<uint8_t> sum(dim);
      for (int v = 0; v < dim; ++v)
        sum[v] = static_cast<uint8_t>(t.exponents[i * dim + v] +
                                      t.exponents[j * dim + v]);
      auto it = lookup.find(pack(sum));
      t.product[it->second].emplace_back(i, j);
    }
  }

  t.shift_up.assign(dim, std::vector<int>(t.size, -1));
  for (int v = 0; v < dim; ++v) {
    for (int k = 0; k < t.size; ++k) {
      if (t.degree[k] + 1 > order) continue;
      std::vector<uint8_t> up(t.exponents.begin() + k * dim,
                              t.exponents.begin() + (k + 1) * dim);
      up[v] += 1;
      auto it = lookup.find(pack(up));
      t.shift_up[v][k] = it == lookup.end() ? -1 : it->second;
    }
  }
  return t;
}

}  // namespace

int JetTables::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<size_t>(dim)) return -1;
  for (int k = 0; k < size; ++k) {
    bool match = true;
    for (int v = 0; v < dim; ++v)
      if (exponents[k * dim + v] != alpha[v]) {
        match = false;
        break;
      }
    if (match) return k;
  }
  return -1;
}

const JetTables& jet_tables(int dim, int order) {
  if (dim < 1 || dim > 8 || order < 0 || order > 8)
    throw std::invalid_argument("jet_tables: dim in [1,8], order in [0,8]");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_unique<JetTables>(build_tables(dim, order));
  return *slot;
}

std::vector<int> promotion_map(const JetTables& from, const JetTables& to,
                               std::span<const int> var_map) {
  if (var_map.size() != static_cast<size_t>(from.dim) || to.order < from.order)
    throw std::invalid_argument("promotion_map: incompatible spaces");
  std::vector<int> map(from.size, -1);
  std::vector<int> alpha(to.dim);
  for (int k = 0; k < from.size; ++k) {
    std::fill(alpha.begin(), alpha.end(), 0);
    for (int v = 0; v < from.dim; ++v)
      alpha[var_map[v]] += from.exponents[k * from.dim + v];
    map[k] = to.index_of(alpha);
    if (map[k] < 0) throw std::logic_error("promotion_map: missing index");
  }
  return map;
}

}  // namespace detail

Jet::Jet(int dim, int order)
    : tab_(&detail::jet_tables(dim, order)), c_(tab_->size, 0.0) {}

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::seed(int dim, int order, double value, int var) {
  if (var < 0 || var >= dim) throw std::invalid_argument("Jet::seed: bad var");
  Jet j(dim, order);
  j.c_[0] = value;
  if (order >= 1) j.c_[1 + var] = 1.0;  // grade-1 block follows the constant
  return j;
}

void Jet::require_same(const Jet& o) const {
  if (tab_ != o.tab_)
    throw std::invalid_argument("Jet: mixed dim/order operands");
}

double Jet::coeff(std::span<const int> alpha) const {
  if (!tab_) throw std::invalid_argument("Jet::coeff on empty jet");
  int k = tab_->index_of(alpha);
  if (k < 0) throw std::invalid_argument("Jet::coeff: index out of range");
  return c_[k];
}

double Jet::partial(std::span<const int> alpha) const {
  double fact = 1.0;
  for (int a : alpha)
    for (int m = 2; m <= a; ++m) fact *= m;
  return coeff(alpha) * fact;
}

Jet Jet::derivative(int var) const {
  if (!tab_) throw std::invalid_argument("Jet::derivative on empty jet");
  if (tab_->order < 1)
    throw std::invalid_argument("Jet::derivative: order 0 jet");
  if (var < 0 || var >= tab_->dim)
    throw std::invalid_argument("Jet::derivative: bad var");
  Jet out(tab_->dim, tab_->order - 1);
  const auto& ot = *out.tab_;
  // Tables are graded, so the lower-order table is a prefix of this one and
  // index k means the same multi-index in both. c'_alpha = (alpha_var + 1) *
  // c_{alpha + e_var}.
  for (int k = 0; k < ot.size; ++k) {
    int up = tab_->shift_up[var][k];
    if (up >= 0)
      out.c_[k] = (tab_->exponents[k * tab_->dim + var] + 1.0) * c_[up];
  }
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (!tab_) throw std::invalid_argument("Jet::truncated on empty jet");
  if (new_order > tab_->order)
    throw std::invalid_argument("Jet::truncated: cannot raise order");
  Jet out(tab_->dim, new_order);
  std::copy(c_.begin(), c_.begin() + out.tab_->size, out.c_.begin());
  return out;
}

Jet Jet::promoted(int new_dim, std::span<const int> var_map) const {
  if (!tab_) throw std::invalid_argument("Jet::promoted on empty jet");
  const auto& to = detail::jet_tables(new_dim, tab_->order);
  // Promotion maps are reused heavily (every base-chart jet gets embedded
  // into the bundle chart), so cache them.
  using Key = std::tuple<const void*, const void*, std::vector<int>>;
  static std::mutex mu;
  static std::map<Key, std::vector<int>> cache;
  const std::vector<int>* map = nullptr;
  {
    Key key{tab_, &to, std::vector<int>(var_map.begin(), var_map.end())};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(std::move(key),
                         detail::promotion_map(*tab_, to, var_map)).first;
    map = &it->second;
  }
  Jet out(new_dim, tab_->order);
  for (int k = 0; k < tab_->size; ++k) out.c_[(*map)[k]] += c_[k];
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& x : out.c_) x = -x;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  require_same(o);
  for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_same(o);
  for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator+=(double s) {
  if (c_.empty()) throw std::invalid_argument("Jet: empty operand");
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) { return *this += -s; }

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet& Jet::operator/=(double s) { return *this *= 1.0 / s; }

Jet operator*(const Jet& a, const Jet& b) {
  a.require_same(b);
  Jet out(a.dim(), a.order());
  const auto& t = *a.tab_;
  for (int k = 0; k < t.size; ++k) {
    double acc = 0.0;
    for (auto [i, j] : t.product[k]) acc += a.c_[i] * b.c_[j];
    out.c_[k] = acc;
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  a.require_same(b);
  if (b.value() == 0.0) throw std::domain_error("Jet division by zero value");
  Jet out(a.dim(), a.order());
  const auto& t = *a.tab_;
  const double inv_b0 = 1.0 / b.c_[0];
  // Graded recursion on c*b = a; the unknown c_k appears only in pair (k, 0).
  for (int k = 0; k < t.size; ++k) {
    double acc = a.c_[k];
    for (auto [i, j] : t.product[k])
      if (j != 0) acc -= out.c_[i] * b.c_[j];
    out.c_[k] = acc * inv_b0;
  }
  return out;
}

Jet operator/(double s, const Jet& b) {
  return Jet::constant(b.dim(), b.order(), s) / b;
}

Jet recip(const Jet& a) { return 1.0 / a; }

Jet sqrt(const Jet& a) {
  if (!(a.value() > 0.0))
    throw std::domain_error("Jet sqrt of non-positive value");
  Jet out(a.dim(), a.order());
  const auto& t = *a.tab_;
  out.c_[0] = std::sqrt(a.c_[0]);
  const double half_inv = 0.5 / out.c_[0];
  // s*s = a; pairs (k,0) and (0,k) both hold the unknown s_k.
  for (int k = 1; k < t.size; ++k) {
    double acc = a.c_[k];
    for (auto [i, j] : t.product[k])
      if (i != k && j != k) acc -= out.c_[i] * out.c_[j];
    out.c_[k] = acc * half_inv;
  }
  return out;
}

std::string Jet::to_string() const {
  std::ostringstream os;
  os << "jet(dim=" << dim() << ",order=" << order() << ")[";
  for (size_t k = 0; k < c_.size(); ++k)
    os << (k ? "," : "") << c_[k];
  os << "]";
  return os.str();
}

}  // namespace twistorlab
