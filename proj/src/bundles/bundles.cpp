#include "cartalg/bundles.hpp"

#include "cartalg/errors.hpp"

namespace cartalg {

Section Section::zero(const Chart& chart, Frame frame, int rank) {
  return Section{chart, frame, ExprVec(static_cast<std::size_t>(rank), Expr(0))};
}

Section Section::basis(const Chart& chart, Frame frame, int rank, int a) {
  Section s = zero(chart, frame, rank);
  s.comps.at(static_cast<std::size_t>(a)) = Expr(1);
  return s;
}

Section Section::parse(const Chart& chart, Frame frame, const std::vector<std::string>& comps) {
  Section s{chart, frame, {}};
  for (const auto& c : comps) s.comps.push_back(chart.expr(c));
  return s;
}

namespace {

void require_compatible(const Section& a, const Section& b) {
  require_same_chart(a.chart, b.chart);
  if (a.rank() != b.rank() || a.frame != b.frame) throw ShapeError("sections of different bundles");
}

}  // namespace

Section operator+(const Section& a, const Section& b) {
  require_compatible(a, b);
  Section s = a;
  for (std::size_t i = 0; i < s.comps.size(); ++i) s.comps[i] += b.comps[i];
  return s;
}

Section operator-(const Section& a, const Section& b) {
  require_compatible(a, b);
  Section s = a;
  for (std::size_t i = 0; i < s.comps.size(); ++i) s.comps[i] -= b.comps[i];
  return s;
}

Section operator*(const Expr& f, const Section& s) {
  Section out = s;
  for (auto& c : out.comps) c = f * c;
  return out;
}

TensorField::TensorField(Chart chart, std::vector<Slot> slots) : chart_(std::move(chart)), slots_(std::move(slots)) {
  std::size_t n = 1;
  for (const auto& s : slots_) {
    if (s.dim < 0) throw ShapeError("negative slot dimension");
    n *= static_cast<std::size_t>(s.dim);
  }
  data_.assign(n, Expr(0));
}

std::size_t TensorField::flat(std::span<const int> idx) const {
  if (idx.size() != slots_.size()) throw ShapeError("tensor index has wrong arity");
  std::size_t f = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= slots_[k].dim) throw ShapeError("tensor index out of range");
    f = f * static_cast<std::size_t>(slots_[k].dim) + static_cast<std::size_t>(idx[k]);
  }
  return f;
}

const Expr& TensorField::at(std::span<const int> idx) const { return data_[flat(idx)]; }
Expr& TensorField::at(std::span<const int> idx) { return data_[flat(idx)]; }

std::vector<int> TensorField::unflatten(std::size_t f) const {
  std::vector<int> idx(slots_.size());
  for (std::size_t k = slots_.size(); k-- > 0;) {
    const auto d = static_cast<std::size_t>(slots_[k].dim);
    idx[k] = static_cast<int>(f % d);
    f /= d;
  }
  return idx;
}

void TensorField::declare(Symmetry s) {
  const auto n = static_cast<int>(slots_.size());
  if (s.first < 0 || s.second < 0 || s.first >= n || s.second >= n || s.first == s.second) {
    throw ShapeError("symmetry refers to a missing slot");
  }
  if (!(slots_[static_cast<std::size_t>(s.first)] == slots_[static_cast<std::size_t>(s.second)])) {
    throw ShapeError("symmetry between unlike slots");
  }
  symmetries_.push_back(s);
}

Verdict TensorField::verify_symmetries(const ZeroTester& tester) const {
  std::vector<Component> comps;
  for (const auto& s : symmetries_) {
    for (std::size_t f = 0; f < data_.size(); ++f) {
      std::vector<int> idx = unflatten(f);
      std::vector<int> swapped = idx;
      std::swap(swapped[static_cast<std::size_t>(s.first)], swapped[static_cast<std::size_t>(s.second)]);
      if (swapped < idx) continue;
      const Expr& other = at(swapped);
      comps.push_back({idx, s.antisymmetric ? data_[f] + other : data_[f] - other});
    }
  }
  return cartalg::check_zero("symmetry", tester, comps);
}

Verdict TensorField::check_zero(const std::string& name, const ZeroTester& tester) const {
  std::vector<Component> comps;
  comps.reserve(data_.size());
  for (std::size_t f = 0; f < data_.size(); ++f) comps.push_back({unflatten(f), data_[f]});
  return cartalg::check_zero(name, tester, comps);
}

TensorField TensorField::map(const std::function<Expr(const Expr&)>& f) const {
  TensorField out = *this;
  for (auto& e : out.data_) e = f(e);
  return out;
}

namespace {

void require_same_shape(const TensorField& a, const TensorField& b) {
  require_same_chart(a.chart(), b.chart());
  if (a.slots() != b.slots()) throw ShapeError("tensors of different type");
}

}  // namespace

TensorField operator+(const TensorField& a, const TensorField& b) {
  require_same_shape(a, b);
  TensorField out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
  require_same_shape(a, b);
  TensorField out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

TensorField operator*(const Expr& f, const TensorField& t) {
  return t.map([&f](const Expr& e) { return f * e; });
}

void for_each_index(std::span<const int> dims, const std::function<void(std::span<const int>)>& f) {
  std::vector<int> idx(dims.size(), 0);
  for (int d : dims) {
    if (d <= 0) return;
  }
  for (;;) {
    f(idx);
    std::size_t k = dims.size();
    while (k > 0) {
      --k;
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (dims.empty()) return;
  }
}

Slot tm_upper(const Chart& c) { return {Variance::Upper, SlotTag::TM, c.dim()}; }
Slot tm_lower(const Chart& c) { return {Variance::Lower, SlotTag::TM, c.dim()}; }

TensorField tensor2(const Chart& chart, const ExprMat& m, Variance v0, Variance v1) {
  const auto n = static_cast<std::size_t>(chart.dim());
  if (m.size() != n) throw ShapeError("matrix does not match chart dimension");
  TensorField t(chart, {{v0, SlotTag::TM, chart.dim()}, {v1, SlotTag::TM, chart.dim()}});
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw ShapeError("matrix does not match chart dimension");
    for (std::size_t j = 0; j < n; ++j) t.at({static_cast<int>(i), static_cast<int>(j)}) = canon(m[i][j]);
  }
  return t;
}

ExprMat matrix_of(const TensorField& t) {
  if (t.order() != 2) throw ShapeError("not a two-slot tensor");
  ExprMat m = zeros(static_cast<std::size_t>(t.slots()[0].dim), static_cast<std::size_t>(t.slots()[1].dim));
  for (int i = 0; i < t.slots()[0].dim; ++i) {
    for (int j = 0; j < t.slots()[1].dim; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = t.at({i, j});
  }
  return m;
}

Expr directional(const Section& v, const Expr& f) {
  if (v.rank() != v.chart.dim()) throw ShapeError("not a vector field");
  Expr s;
  for (int i = 0; i < v.rank(); ++i) {
    if (v[i].is_zero_literal()) continue;
    const Expr d = differentiate(f, i);
    if (!d.is_zero_literal()) s += v[i] * d;
  }
  return s;
}

Section vf_bracket(const Section& v, const Section& w) {
  require_same_chart(v.chart, w.chart);
  if (v.frame != Frame::Tangent || w.frame != Frame::Tangent) throw ShapeError("vf_bracket needs vector fields");
  if (v.rank() != v.chart.dim() || w.rank() != w.chart.dim()) throw ShapeError("vector field has wrong rank");
  Section out = Section::zero(v.chart, Frame::Tangent, v.rank());
  for (int j = 0; j < v.rank(); ++j) out.comps[static_cast<std::size_t>(j)] = directional(v, w[j]) - directional(w, v[j]);
  return out;
}

TensorField scalar_field(const Chart& chart, const Expr& f) {
  TensorField t(chart, {});
  t.at(std::span<const int>{}) = canon(f);
  return t;
}

TensorField lie_derivative(const Section& v, const TensorField& t) {
  require_same_chart(v.chart, t.chart());
  const int n = v.chart.dim();
  for (const auto& s : t.slots()) {
    if (s.tag != SlotTag::TM) throw ShapeError("lie_derivative: algebroid-tagged slot present");
  }
  // dv[i][k] = d_k v^i
  std::vector<ExprVec> dv(static_cast<std::size_t>(n), ExprVec(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) dv[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = differentiate(v[i], k);
  }
  TensorField out(t.chart(), t.slots());
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::vector<int> idx = t.unflatten(f);
    Expr s = directional(v, t.data()[f]);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const int orig = idx[p];
      for (int k = 0; k < n; ++k) {
        idx[p] = k;
        const Expr& tk = t.at(idx);
        if (tk.is_zero_literal()) continue;
        if (t.slots()[p].variance == Variance::Upper) {
          // -T^{..k..} d_k V^i
          const Expr& d = dv[static_cast<std::size_t>(orig)][static_cast<std::size_t>(k)];
          if (!d.is_zero_literal()) s -= tk * d;
        } else {
          // +T_{..k..} d_j V^k
          const Expr& d = dv[static_cast<std::size_t>(k)][static_cast<std::size_t>(orig)];
          if (!d.is_zero_literal()) s += tk * d;
        }
      }
      idx[p] = orig;
    }
    out.at(t.unflatten(f)) = s;
  }
  return out;
}

TensorField tensor_contract(const TensorField& t, int upper, int lower) {
  const auto n = static_cast<int>(t.order());
  if (upper < 0 || lower < 0 || upper >= n || lower >= n || upper == lower) throw ShapeError("contract: bad slot");
  const Slot& su = t.slots()[static_cast<std::size_t>(upper)];
  const Slot& sl = t.slots()[static_cast<std::size_t>(lower)];
  if (su.variance != Variance::Upper || sl.variance != Variance::Lower) {
    throw ShapeError("contract: slots must be one upper and one lower");
  }
  if (su.tag != sl.tag || su.dim != sl.dim) throw ShapeError("contract: slot tags differ");
  std::vector<Slot> rest;
  for (int k = 0; k < n; ++k) {
    if (k != upper && k != lower) rest.push_back(t.slots()[static_cast<std::size_t>(k)]);
  }
  TensorField out(t.chart(), rest);
  for (std::size_t f = 0; f < out.size(); ++f) {
    const std::vector<int> ridx = out.unflatten(f);
    Expr s;
    for (int c = 0; c < su.dim; ++c) {
      std::vector<int> idx;
      std::size_t r = 0;
      for (int k = 0; k < n; ++k) idx.push_back(k == upper || k == lower ? c : ridx[r++]);
      s += t.at(idx);
    }
    out.at(ridx) = s;
  }
  return out;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  require_same_chart(a.chart(), b.chart());
  std::vector<Slot> slots = a.slots();
  slots.insert(slots.end(), b.slots().begin(), b.slots().end());
  TensorField out(a.chart(), slots);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<int> idx = a.unflatten(i);
      const std::vector<int> jb = b.unflatten(j);
      idx.insert(idx.end(), jb.begin(), jb.end());
      out.at(idx) = a.data()[i] * b.data()[j];
    }
  }
  return out;
}

TensorField as_tensor(const Section& s) {
  Slot slot;
  switch (s.frame) {
    case Frame::Tangent: slot = {Variance::Upper, SlotTag::TM, s.rank()}; break;
    case Frame::Cotangent: slot = {Variance::Lower, SlotTag::TM, s.rank()}; break;
    case Frame::Algebroid: slot = {Variance::Upper, SlotTag::Algebroid, s.rank()}; break;
    case Frame::Other: throw ShapeError("section has no tensor slot type");
  }
  TensorField t(s.chart, {slot});
  for (int a = 0; a < s.rank(); ++a) t.at({a}) = s[a];
  return t;
}

}  // namespace cartalg
