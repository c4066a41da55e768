#pragma once

// Finite sets with structured elements, and the category FinSet as a base
// for enriched graphs.  Elements are atoms, tuples, or tagged injections;
// products and coproducts are the canonical tuple/tagged-union sets, so
// repeated constructions (products of coproducts of homs, ...) stay
// canonical and comparable.

#include <compare>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "core.hpp"

namespace freeprod {

class Elem {
 public:
  enum class Kind { atom, tuple, tag };

  Elem() : kind_(Kind::atom) {}

  static Elem atom(std::string name) {
    Elem e;
    e.kind_ = Kind::atom;
    e.name_ = std::move(name);
    return e;
  }
  static Elem tuple(std::vector<Elem> items) {
    Elem e;
    e.kind_ = Kind::tuple;
    e.items_ = std::move(items);
    return e;
  }
  static Elem tagged(std::size_t tag, Elem inner) {
    Elem e;
    e.kind_ = Kind::tag;
    e.tag_ = tag;
    e.items_.push_back(std::move(inner));
    return e;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Elem>& items() const { return items_; }
  std::size_t tag() const { return tag_; }
  const Elem& inner() const { return items_.front(); }

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.kind_ == b.kind_ && a.tag_ == b.tag_ && a.name_ == b.name_ &&
           a.items_ == b.items_;
  }
  friend bool operator<(const Elem& a, const Elem& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.name_ != b.name_) return a.name_ < b.name_;
    if (a.tag_ != b.tag_) return a.tag_ < b.tag_;
    return a.items_ < b.items_;
  }

  std::string str() const {
    switch (kind_) {
      case Kind::atom:
        return name_;
      case Kind::tuple: {
        std::string s = "(";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i) s += ",";
          s += items_[i].str();
        }
        return s + ")";
      }
      default: {
        std::ostringstream os;
        os << "#" << tag_ << ":" << items_.front().str();
        return os.str();
      }
    }
  }

 private:
  Kind kind_;
  std::string name_;
  std::vector<Elem> items_;
  std::size_t tag_ = 0;
};

// A finite set: sorted vector without duplicates.
using SetObj = std::vector<Elem>;

inline SetObj make_set(std::vector<Elem> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

inline SetObj atoms(const std::vector<std::string>& names) {
  std::vector<Elem> v;
  v.reserve(names.size());
  for (auto& n : names) v.push_back(Elem::atom(n));
  return make_set(std::move(v));
}

inline bool contains(const SetObj& s, const Elem& e) {
  return std::binary_search(s.begin(), s.end(), e);
}

inline std::size_t index_of(const SetObj& s, const Elem& e) {
  auto it = std::lower_bound(s.begin(), s.end(), e);
  if (it == s.end() || !(*it == e)) throw precondition_error("element not in set: " + e.str());
  return static_cast<std::size_t>(it - s.begin());
}

// A function between finite sets, tabulated.
struct SetMor {
  SetObj dom, cod;
  std::map<Elem, Elem> map;

  const Elem& operator()(const Elem& e) const {
    auto it = map.find(e);
    if (it == map.end()) throw precondition_error("function undefined at " + e.str());
    return it->second;
  }

  bool total() const {
    if (map.size() != dom.size()) return false;
    for (auto& [k, v] : map)
      if (!contains(dom, k) || !contains(cod, v)) return false;
    return true;
  }

  friend bool operator==(const SetMor& f, const SetMor& g) {
    return f.dom == g.dom && f.cod == g.cod && f.map == g.map;
  }
  friend bool operator<(const SetMor& f, const SetMor& g) {
    if (f.dom != g.dom) return f.dom < g.dom;
    if (f.cod != g.cod) return f.cod < g.cod;
    return f.map < g.map;
  }
};

inline SetMor make_mor(SetObj dom, SetObj cod,
                       const std::function<Elem(const Elem&)>& f) {
  SetMor m{std::move(dom), std::move(cod), {}};
  for (auto& e : m.dom) m.map.emplace(e, f(e));
  return m;
}

inline bool is_bijection(const SetMor& f) {
  if (f.dom.size() != f.cod.size() || !f.total()) return false;
  SetObj image;
  for (auto& [k, v] : f.map) image.push_back(v);
  return make_set(std::move(image)) == f.cod;
}

// ---------------------------------------------------------------------------
// FinSet as a base for enriched graphs: finite products/coproducts, hom-set
// enumeration, composition.  This is the `Base` interface; FinCatBase in
// base_fincat.hpp provides the same surface one enrichment level up.

struct FinSetBase {
  using Obj = SetObj;
  using Mor = SetMor;

  static Obj initial() { return {}; }
  static Obj terminal() { return {Elem::tuple({})}; }

  static bool is_initial(const Obj& x) { return x.empty(); }

  static Obj product(const std::vector<Obj>& xs) {
    std::vector<Elem> out;
    std::vector<std::size_t> radix;
    radix.reserve(xs.size());
    std::size_t total = 1;
    for (auto& x : xs) {
      radix.push_back(x.size());
      total = x.empty() ? 0 : total * x.size();
      guard(total <= 1000000, "product set too large");
    }
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<Elem> t;
      t.reserve(xs.size());
      for (std::size_t j = 0; j < xs.size(); ++j) t.push_back(xs[j][idx[j]]);
      out.push_back(Elem::tuple(std::move(t)));
      return true;
    });
    return make_set(std::move(out));
  }

  static Mor projection(const std::vector<Obj>& xs, std::size_t j) {
    return make_mor(product(xs), xs[j],
                    [j](const Elem& e) { return e.items()[j]; });
  }

  // Pairing <f_j> : dom -> product(cod_j), all f_j sharing a domain.
  static Mor tupling(const std::vector<Mor>& fs) {
    if (fs.empty()) throw precondition_error("tupling needs at least one map");
    std::vector<Obj> cods;
    for (auto& f : fs) cods.push_back(f.cod);
    return make_mor(fs.front().dom, product(cods), [&fs](const Elem& e) {
      std::vector<Elem> t;
      t.reserve(fs.size());
      for (auto& f : fs) t.push_back(f(e));
      return Elem::tuple(std::move(t));
    });
  }

  static Obj coproduct(const std::vector<Obj>& xs) {
    std::vector<Elem> out;
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (auto& e : xs[j]) out.push_back(Elem::tagged(j, e));
    return make_set(std::move(out));
  }

  static Mor injection(const std::vector<Obj>& xs, std::size_t j) {
    return make_mor(xs[j], coproduct(xs),
                    [j](const Elem& e) { return Elem::tagged(j, e); });
  }

  // Copairing [f_j] : coproduct(dom_j) -> cod, all f_j sharing a codomain.
  static Mor cotupling(const std::vector<Mor>& fs) {
    if (fs.empty()) throw precondition_error("cotupling needs at least one map");
    std::vector<Obj> doms;
    for (auto& f : fs) doms.push_back(f.dom);
    return make_mor(coproduct(doms), fs.front().cod, [&fs](const Elem& e) {
      return fs[e.tag()](e.inner());
    });
  }

  static Mor identity(const Obj& x) {
    return make_mor(x, x, [](const Elem& e) { return e; });
  }

  static Mor compose(const Mor& g, const Mor& f) {
    return make_mor(f.dom, g.cod, [&](const Elem& e) { return g(f(e)); });
  }

  static bool mor_eq(const Mor& f, const Mor& g) { return f == g; }

  // All functions a -> b; |b|^|a| of them, guarded.
  static std::vector<Mor> hom_set(const Obj& a, const Obj& b,
                                  std::size_t cap = 100000) {
    if (a.empty()) {
      return {Mor{a, b, {}}};
    }
    if (b.empty()) return {};
    checked_pow(b.size(), a.size(), cap);
    std::vector<Mor> out;
    std::vector<std::size_t> radix(a.size(), b.size());
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      Mor m{a, b, {}};
      for (std::size_t i = 0; i < a.size(); ++i) m.map.emplace(a[i], b[idx[i]]);
      out.push_back(std::move(m));
      return true;
    });
    return out;
  }

  static std::string obj_str(const Obj& x) {
    std::string s = "{";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) s += ",";
      s += x[i].str();
    }
    return s + "}";
  }
};

}  // namespace freeprod
