#pragma once

// Monads on finite sets and the structure their algebras inherit: the
// multicategory of multimorphisms (maps that are algebra maps jointly in
// all variables), pointwise algebra structure on function sets, the hom
// algebra carved out as an equalizer, and the tensor algebra presented as
// a coequalizer of a free algebra.
//
// A monad is given in extension form: the object map, the unit, a sparse
// Kleisli extension evaluated one element at a time, and the monoidal
// coherence evaluated one tuple at a time.  Everything else (functor
// action, multiplication) is derived, so instances stay cheap even when
// intermediate carriers would be large.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "elem.hpp"
#include "multicat.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// finite commutative rings, tabulated by element name

struct FiniteCommRing {
  std::string name;
  std::vector<std::string> elems;
  std::string zero, one;
  std::map<std::pair<std::string, std::string>, std::string> add, mul;

  const std::string& plus(const std::string& a, const std::string& b) const {
    auto it = add.find({a, b});
    if (it == add.end())
      throw precondition_error("ring sum undefined at " + a + "+" + b);
    return it->second;
  }
  const std::string& times(const std::string& a, const std::string& b) const {
    auto it = mul.find({a, b});
    if (it == mul.end())
      throw precondition_error("ring product undefined at " + a + "*" + b);
    return it->second;
  }
};

inline FiniteCommRing zmod_ring(std::size_t n) {
  if (n == 0) throw precondition_error("modulus must be positive");
  FiniteCommRing R;
  R.name = "Z" + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) R.elems.push_back(std::to_string(i));
  R.zero = "0";
  R.one = n == 1 ? "0" : "1";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      R.add[{R.elems[i], R.elems[j]}] = std::to_string((i + j) % n);
      R.mul[{R.elems[i], R.elems[j]}] = std::to_string((i * j) % n);
    }
  return R;
}

inline Report validate_ring(const FiniteCommRing& R) {
  Report rep;
  {
    auto& c = rep.add("operation-tables");
    std::set<std::string> names(R.elems.begin(), R.elems.end());
    if (names.size() != R.elems.size()) c.fail_case("duplicate element name");
    if (!names.count(R.zero)) c.fail_case("zero is not an element");
    if (!names.count(R.one)) c.fail_case("one is not an element");
    for (const auto& a : R.elems)
      for (const auto& b : R.elems) {
        ++c.instances;
        auto s = R.add.find({a, b});
        auto p = R.mul.find({a, b});
        if (s == R.add.end() || !names.count(s->second))
          c.fail_case("sum missing or escapes at " + a + "+" + b);
        else if (p == R.mul.end() || !names.count(p->second))
          c.fail_case("product missing or escapes at " + a + "*" + b);
      }
    if (c.verdict == Verdict::fail) return rep;  // nothing below is safe
  }
  {
    auto& c = rep.add("additive-group");
    for (const auto& a : R.elems) {
      ++c.instances;
      if (R.plus(a, R.zero) != a) c.fail_case("zero is not neutral at " + a);
      bool neg = false;
      for (const auto& b : R.elems)
        if (R.plus(a, b) == R.zero) neg = true;
      if (!neg) c.fail_case("no additive inverse for " + a);
    }
    for (const auto& a : R.elems)
      for (const auto& b : R.elems) {
        ++c.instances;
        if (R.plus(a, b) != R.plus(b, a))
          c.fail_case("sum not commutative at " + a + "," + b);
        for (const auto& d : R.elems)
          if (R.plus(R.plus(a, b), d) != R.plus(a, R.plus(b, d)))
            c.fail_case("sum not associative at " + a + "," + b + "," + d);
      }
  }
  {
    auto& c = rep.add("multiplicative-monoid");
    for (const auto& a : R.elems) {
      ++c.instances;
      if (R.times(a, R.one) != a) c.fail_case("one is not neutral at " + a);
      for (const auto& b : R.elems) {
        if (R.times(a, b) != R.times(b, a))
          c.fail_case("product not commutative at " + a + "," + b);
        for (const auto& d : R.elems)
          if (R.times(R.times(a, b), d) != R.times(a, R.times(b, d)))
            c.fail_case("product not associative at " + a + "," + b + "," + d);
      }
    }
  }
  {
    auto& c = rep.add("distributivity");
    for (const auto& a : R.elems)
      for (const auto& b : R.elems)
        for (const auto& d : R.elems) {
          ++c.instances;
          if (R.times(a, R.plus(b, d)) != R.plus(R.times(a, b), R.times(a, d)))
            c.fail_case("fails at " + a + "*(" + b + "+" + d + ")");
        }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// monads on finite sets, in Kleisli extension form

struct SetMonad {
  std::string name;
  std::function<SetObj(const SetObj&)> carrier;  // T X, sorted; guards its own size
  std::function<SetMor(const SetObj&)> unit;     // eta_X : X -> T X
  // For g : S -> T X given as a table over all of S, and t in T S, the value
  // of the extension g* : T S -> T X at t.  The table's key order is the
  // sorted order of S, matching how T S was built.
  std::function<Elem(const SetObj&, const std::map<Elem, Elem>&, const Elem&)> extend;
  // For (t_i)_i in prod_i T X_i, the value of the monoidal coherence
  // phi : prod_i T X_i -> T(prod_i X_i) at that tuple.  The empty sequence
  // yields the unit at the one-point set.
  std::function<Elem(const std::vector<SetObj>&, const Elem&)> coherence_at;
  // Optional: a generating set of binary operations, as elements of T of the
  // given two-letter set, such that every term in two variables is a
  // composite of these and constants.  When absent, all of T(two) is used.
  std::function<std::vector<Elem>(const SetObj&)> binary_basis;
  // Optional: eta_X at a single element without materializing T X.  Falls
  // back to the unit morphism, which does build the carrier.
  std::function<Elem(const SetObj&, const Elem&)> unit_value;

  Elem eta(const SetObj& x, const Elem& e) const {
    return unit_value ? unit_value(x, e) : unit(x)(e);
  }
  // T f at one element, via extension of eta . f
  Elem on_elem(const SetMor& f, const Elem& t) const {
    std::map<Elem, Elem> g;
    for (const auto& x : f.dom) g.emplace(x, eta(f.cod, f(x)));
    return extend(f.cod, g, t);
  }
  SetMor on_mor(const SetMor& f) const {
    std::map<Elem, Elem> g;
    for (const auto& x : f.dom) g.emplace(x, eta(f.cod, f(x)));
    SetObj td = carrier(f.dom);
    return make_mor(td, carrier(f.cod), [&](const Elem& t) {
      return extend(f.cod, g, t);
    });
  }
  // mu_X at one element of T T X: extend the identity assignment
  Elem mult_at(const SetObj& x, const Elem& t) const {
    std::map<Elem, Elem> g;
    for (const auto& u : carrier(x)) g.emplace(u, u);
    return extend(x, g, t);
  }
  SetMor mult(const SetObj& x) const {
    SetObj tx = carrier(x);
    std::map<Elem, Elem> g;
    for (const auto& u : tx) g.emplace(u, u);
    return make_mor(carrier(tx), tx, [&](const Elem& t) {
      return extend(x, g, t);
    });
  }
  SetMor coherence(const std::vector<SetObj>& xs) const {
    std::vector<SetObj> txs;
    for (const auto& x : xs) txs.push_back(carrier(x));
    SetObj dom = FinSetBase::product(txs);
    return make_mor(dom, carrier(FinSetBase::product(xs)), [&](const Elem& t) {
      return coherence_at(xs, t);
    });
  }
};

inline SetMonad identity_monad() {
  SetMonad T;
  T.name = "id";
  T.carrier = [](const SetObj& x) { return x; };
  T.unit = [](const SetObj& x) { return FinSetBase::identity(x); };
  T.extend = [](const SetObj&, const std::map<Elem, Elem>& g, const Elem& t) {
    auto it = g.find(t);
    if (it == g.end()) throw precondition_error("extension undefined at " + t.str());
    return it->second;
  };
  T.coherence_at = [](const std::vector<SetObj>&, const Elem& t) { return t; };
  T.unit_value = [](const SetObj&, const Elem& e) { return e; };
  return T;
}

// Formal R-linear combinations.  An element of T X is the tuple of
// coefficients over X in sorted order, so |T X| = |R|^|X| and T of the
// empty set is a single empty tuple (the zero module).
inline SetMonad rmodule_monad(const FiniteCommRing& R, std::size_t max_set = 1u << 20) {
  auto Rp = std::make_shared<FiniteCommRing>(R);
  SetMonad T;
  T.name = "rmod:" + R.name;
  auto carr = [Rp, max_set](const SetObj& x) {
    checked_pow(Rp->elems.size(), x.size(), max_set);
    std::vector<Elem> out;
    std::vector<std::size_t> radix(x.size(), Rp->elems.size());
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<Elem> t;
      t.reserve(x.size());
      for (std::size_t i = 0; i < x.size(); ++i)
        t.push_back(Elem::atom(Rp->elems[idx[i]]));
      out.push_back(Elem::tuple(std::move(t)));
      return true;
    });
    return make_set(std::move(out));
  };
  T.carrier = carr;
  auto indicator = [Rp](const SetObj& x, const Elem& e) {
    std::vector<Elem> t(x.size(), Elem::atom(Rp->zero));
    t[index_of(x, e)] = Elem::atom(Rp->one);
    return Elem::tuple(std::move(t));
  };
  T.unit_value = indicator;
  T.unit = [carr, indicator](const SetObj& x) {
    return make_mor(x, carr(x), [&](const Elem& e) { return indicator(x, e); });
  };
  T.extend = [Rp](const SetObj& x, const std::map<Elem, Elem>& g, const Elem& t) {
    if (t.kind() != Elem::Kind::tuple || t.items().size() != g.size())
      throw precondition_error("combination has the wrong width for the table");
    std::vector<std::string> acc(x.size(), Rp->zero);
    std::size_t k = 0;
    for (const auto& [s, gs] : g) {
      (void)s;
      const std::string& c = t.items()[k++].name();
      if (c == Rp->zero) continue;  // sparse: skip vanishing coefficients
      const auto& row = gs.items();
      for (std::size_t i = 0; i < x.size(); ++i)
        acc[i] = Rp->plus(acc[i], Rp->times(c, row[i].name()));
    }
    std::vector<Elem> out;
    out.reserve(acc.size());
    for (auto& a : acc) out.push_back(Elem::atom(std::move(a)));
    return Elem::tuple(std::move(out));
  };
  T.coherence_at = [Rp](const std::vector<SetObj>& xs, const Elem& e) {
    SetObj prod = FinSetBase::product(xs);
    std::vector<std::string> acc(prod.size(), Rp->zero);
    std::vector<std::size_t> radix;
    for (const auto& x : xs) radix.push_back(x.size());
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::string c = Rp->one;
      std::vector<Elem> at;
      at.reserve(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        c = Rp->times(c, e.items()[i].items()[idx[i]].name());
        at.push_back(xs[i][idx[i]]);
      }
      acc[index_of(prod, Elem::tuple(std::move(at)))] = std::move(c);
      return true;
    });
    std::vector<Elem> out;
    out.reserve(acc.size());
    for (auto& a : acc) out.push_back(Elem::atom(std::move(a)));
    return Elem::tuple(std::move(out));
  };
  // every two-variable combination is a sum of scalar multiples, so addition
  // and the scalings generate (keeps the congruence engine off |R|^2 ops)
  T.binary_basis = [Rp](const SetObj&) {
    std::vector<Elem> ops;
    ops.push_back(Elem::tuple({Elem::atom(Rp->one), Elem::atom(Rp->one)}));
    for (const auto& r : Rp->elems)
      ops.push_back(Elem::tuple({Elem::atom(r), Elem::atom(Rp->zero)}));
    return ops;
  };
  return T;
}

// ---------------------------------------------------------------------------
// monad validation: laws checked by enumeration, budgets marked honestly

inline Report validate_set_monad(const SetMonad& T, const std::vector<SetObj>& objs,
                                 std::size_t cap = 20000,
                                 std::size_t max_instances = 20000) {
  Report rep;
  {
    auto& c = rep.add("unit-typing");
    for (const auto& x : objs) {
      ++c.instances;
      try {
        SetObj tx = T.carrier(x);
        if (!(tx == make_set(tx))) c.fail_case("carrier not sorted or has duplicates");
        SetMor e = T.unit(x);
        if (!(e.dom == x) || !(e.cod == tx) || !e.total())
          c.fail_case("unit is not a total map into the carrier");
      } catch (const size_guard_error&) {
        c.exhausted = true;
      }
    }
  }
  {
    auto& c = rep.add("unit-naturality");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          auto fs = FinSetBase::hom_set(x, y, cap);
          SetMor ey = T.unit(y);
          SetMor ex = T.unit(x);
          for (const auto& f : fs)
            for (const auto& e : x) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              if (!(T.on_elem(f, ex(e)) == ey(f(e))))
                c.fail_case("T f . eta != eta . f at " + e.str());
            }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("mult-naturality");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          auto fs = FinSetBase::hom_set(x, y, cap);
          SetObj ttx = T.carrier(T.carrier(x));
          guard(ttx.size() <= cap, "double carrier too large");
          for (const auto& f : fs) {
            SetMor tf = T.on_mor(f);
            for (const auto& t : ttx) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              if (!(T.mult_at(y, T.on_elem(tf, t)) == tf(T.mult_at(x, t))))
                c.fail_case("mu . TTf != Tf . mu at " + t.str());
            }
            if (c.instances > max_instances) break;
          }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("unit-laws");
    for (const auto& x : objs) {
      try {
        SetObj tx = T.carrier(x);
        SetMor ex = T.unit(x);
        for (const auto& t : tx) {
          if (++c.instances > max_instances) { c.exhausted = true; break; }
          if (!(T.mult_at(x, T.eta(tx, t)) == t))
            c.fail_case("mu . eta_T != id at " + t.str());
          if (!(T.mult_at(x, T.on_elem(ex, t)) == t))
            c.fail_case("mu . T eta != id at " + t.str());
        }
      } catch (const size_guard_error&) {
        c.exhausted = true;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("associativity-law");
    for (const auto& x : objs) {
      try {
        SetObj tx = T.carrier(x);
        SetObj tttx = T.carrier(T.carrier(tx));
        guard(tttx.size() <= cap, "triple carrier too large");
        SetMor mu = T.mult(x);
        for (const auto& t : tttx) {
          if (++c.instances > max_instances) { c.exhausted = true; break; }
          if (!(T.mult_at(x, T.mult_at(tx, t)) == T.mult_at(x, T.on_elem(mu, t))))
            c.fail_case("mu . mu_T != mu . T mu at " + t.str());
        }
      } catch (const size_guard_error&) {
        c.exhausted = true;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("coherence-nullary-unary");
    Elem pt = Elem::tuple({});
    ++c.instances;
    if (!(T.coherence_at({}, pt) == T.unit(FinSetBase::terminal())(pt)))
      c.fail_case("empty coherence is not the unit at the point");
    for (const auto& x : objs) {
      try {
        SetObj prod = FinSetBase::product({x});
        SetMor wrap = make_mor(x, prod, [](const Elem& e) {
          return Elem::tuple({e});
        });
        for (const auto& t : T.carrier(x)) {
          ++c.instances;
          if (!(T.coherence_at({x}, Elem::tuple({t})) == T.on_elem(wrap, t)))
            c.fail_case("unary coherence differs from T of the bracketing at " + t.str());
        }
      } catch (const size_guard_error&) {
        c.exhausted = true;
      }
    }
  }
  {
    auto& c = rep.add("coherence-unit");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          SetMor ex = T.unit(x), ey = T.unit(y);
          SetMor ep = T.unit(FinSetBase::product({x, y}));
          for (const auto& a : x)
            for (const auto& b : y) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              if (!(T.coherence_at({x, y}, Elem::tuple({ex(a), ey(b)})) ==
                    ep(Elem::tuple({a, b}))))
                c.fail_case("phi . (eta x eta) != eta at " + a.str() + "," + b.str());
            }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("coherence-naturality");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          auto fs = FinSetBase::hom_set(x, x, cap);
          auto gs = FinSetBase::hom_set(y, y, cap);
          SetObj tx = T.carrier(x), ty = T.carrier(y);
          for (const auto& f : fs) {
            for (const auto& g : gs) {
              SetMor fg = make_mor(FinSetBase::product({x, y}),
                                   FinSetBase::product({x, y}), [&](const Elem& e) {
                                     return Elem::tuple({f(e.items()[0]), g(e.items()[1])});
                                   });
              for (const auto& t : tx)
                for (const auto& u : ty) {
                  if (++c.instances > max_instances) { c.exhausted = true; break; }
                  Elem lhs = T.on_elem(fg, T.coherence_at({x, y}, Elem::tuple({t, u})));
                  Elem rhs = T.coherence_at(
                      {x, y}, Elem::tuple({T.on_elem(f, t), T.on_elem(g, u)}));
                  if (!(lhs == rhs))
                    c.fail_case("T(f x g) . phi != phi . (Tf x Tg) at " + t.str());
                }
              if (c.instances > max_instances) break;
            }
            if (c.instances > max_instances) break;
          }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("coherence-mult");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          SetObj ttx = T.carrier(T.carrier(x));
          SetObj tty = T.carrier(T.carrier(y));
          guard(ttx.size() * tty.size() <= cap, "double carriers too large");
          SetObj prod = FinSetBase::product({x, y});
          SetMor phi = T.coherence({x, y});
          for (const auto& t : ttx)
            for (const auto& u : tty) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              Elem lhs = T.coherence_at(
                  {x, y}, Elem::tuple({T.mult_at(x, t), T.mult_at(y, u)}));
              Elem two = T.coherence_at({T.carrier(x), T.carrier(y)},
                                        Elem::tuple({t, u}));
              Elem rhs = T.mult_at(prod, T.on_elem(phi, two));
              if (!(lhs == rhs))
                c.fail_case("phi . (mu x mu) != mu . T phi . phi at " + t.str());
            }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("coherence-symmetry");
    for (const auto& x : objs) {
      for (const auto& y : objs) {
        try {
          SetObj xy = FinSetBase::product({x, y});
          SetMor braid = make_mor(xy, FinSetBase::product({y, x}), [](const Elem& e) {
            return Elem::tuple({e.items()[1], e.items()[0]});
          });
          for (const auto& t : T.carrier(x))
            for (const auto& u : T.carrier(y)) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              if (!(T.on_elem(braid, T.coherence_at({x, y}, Elem::tuple({t, u}))) ==
                    T.coherence_at({y, x}, Elem::tuple({u, t}))))
                c.fail_case("coherence does not commute with the swap at " + t.str());
            }
        } catch (const size_guard_error&) {
          c.exhausted = true;
        }
        if (c.instances > max_instances) break;
      }
      if (c.instances > max_instances) break;
    }
  }
  {
    auto& c = rep.add("coherence-associativity");
    for (const auto& x : objs) {
      if (x.empty()) continue;
      try {
        const SetObj& y = objs.back();
        SetObj xy = FinSetBase::product({x, y});
        SetObj flat = FinSetBase::product({x, y, x});
        SetMor flatten = make_mor(FinSetBase::product({xy, x}), flat, [](const Elem& e) {
          return Elem::tuple({e.items()[0].items()[0], e.items()[0].items()[1],
                              e.items()[1]});
        });
        for (const auto& t : T.carrier(x))
          for (const auto& u : T.carrier(y))
            for (const auto& v : T.carrier(x)) {
              if (++c.instances > max_instances) { c.exhausted = true; break; }
              Elem staged = T.coherence_at(
                  {xy, x},
                  Elem::tuple({T.coherence_at({x, y}, Elem::tuple({t, u})), v}));
              if (!(T.on_elem(flatten, staged) ==
                    T.coherence_at({x, y, x}, Elem::tuple({t, u, v}))))
                c.fail_case("staged coherence differs from the flat one at " + t.str());
            }
      } catch (const size_guard_error&) {
        c.exhausted = true;
      }
      if (c.instances > max_instances) break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// algebras

struct TAlgebra {
  std::string name;
  SetObj carrier;
  SetMor action;                    // T(carrier) -> carrier
  std::optional<SetObj> free_base;  // set when built as a free algebra
};

inline TAlgebra free_algebra(const SetMonad& T, std::string name, const SetObj& base) {
  TAlgebra a;
  a.name = std::move(name);
  a.carrier = T.carrier(base);
  a.action = T.mult(base);
  a.free_base = base;
  return a;
}

inline Report validate_algebra(const SetMonad& T, const TAlgebra& A,
                               std::size_t cap = 20000,
                               std::size_t max_instances = 20000) {
  Report rep;
  {
    auto& c = rep.add("action-typing");
    ++c.instances;
    if (!(A.action.dom == T.carrier(A.carrier)) || !(A.action.cod == A.carrier) ||
        !A.action.total())
      c.fail_case("action is not a total map T(carrier) -> carrier");
  }
  {
    auto& c = rep.add("unit-law");
    SetMor e = T.unit(A.carrier);
    for (const auto& x : A.carrier) {
      ++c.instances;
      if (!(A.action(e(x)) == x)) c.fail_case("a . eta != id at " + x.str());
    }
  }
  {
    auto& c = rep.add("associativity-law");
    SetObj tt;
    try {
      tt = T.carrier(T.carrier(A.carrier));
      guard(tt.size() <= cap, "double carrier too large");
    } catch (const size_guard_error&) {
      c.exhausted = true;
      return rep;
    }
    for (const auto& t : tt) {
      if (++c.instances > max_instances) { c.exhausted = true; break; }
      if (!(A.action(T.mult_at(A.carrier, t)) ==
            A.action(T.on_elem(A.action, t))))
        c.fail_case("a . mu != a . T a at " + t.str());
    }
  }
  return rep;
}

// plain (one-variable) algebra morphism check: f . a == b . T f
inline bool is_algebra_map(const SetMonad& T, const TAlgebra& A, const TAlgebra& B,
                           const SetMor& f) {
  std::map<Elem, Elem> lift;
  for (const auto& x : A.carrier) lift.emplace(x, T.eta(B.carrier, f(x)));
  for (const auto& t : T.carrier(A.carrier))
    if (!(f(A.action(t)) == B.action(T.extend(B.carrier, lift, t))))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// multimorphisms of algebras
//
// A map f : prod_i X_i -> Y is a multimorphism when applying the actions
// coordinatewise and then f agrees with pushing f through T (after the
// monoidal coherence) and applying the action of Y.  The one-variable-at-a-
// time version keeps all other coordinates as plain elements and lifts them
// with the unit.

inline bool is_multi_algebra_map(const SetMonad& T, const std::vector<TAlgebra>& As,
                                 const TAlgebra& Y, const SetMor& f) {
  std::vector<SetObj> carriers, tcarriers;
  for (const auto& A : As) {
    carriers.push_back(A.carrier);
    tcarriers.push_back(T.carrier(A.carrier));
  }
  std::map<Elem, Elem> lift;
  for (const auto& x : f.dom) lift.emplace(x, T.eta(Y.carrier, f(x)));
  for (const auto& g : FinSetBase::product(tcarriers)) {
    std::vector<Elem> applied;
    applied.reserve(As.size());
    for (std::size_t i = 0; i < As.size(); ++i)
      applied.push_back(As[i].action(g.items()[i]));
    Elem lhs = f(Elem::tuple(std::move(applied)));
    Elem rhs = Y.action(
        T.extend(Y.carrier, lift, T.coherence_at(carriers, g)));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

inline bool is_algebra_map_in_variable(const SetMonad& T,
                                       const std::vector<TAlgebra>& As,
                                       const TAlgebra& Y, const SetMor& f,
                                       std::size_t j) {
  if (j >= As.size()) throw precondition_error("variable index out of range");
  std::vector<SetObj> carriers, doms;
  for (std::size_t i = 0; i < As.size(); ++i) {
    carriers.push_back(As[i].carrier);
    doms.push_back(i == j ? T.carrier(As[i].carrier) : As[i].carrier);
  }
  std::map<Elem, Elem> lift;
  for (const auto& x : f.dom) lift.emplace(x, T.eta(Y.carrier, f(x)));
  for (const auto& d : FinSetBase::product(doms)) {
    std::vector<Elem> at, up;
    at.reserve(As.size());
    up.reserve(As.size());
    for (std::size_t i = 0; i < As.size(); ++i) {
      at.push_back(i == j ? As[j].action(d.items()[i]) : d.items()[i]);
      up.push_back(i == j ? d.items()[i] : T.eta(carriers[i], d.items()[i]));
    }
    Elem lhs = f(Elem::tuple(std::move(at)));
    Elem rhs = Y.action(T.extend(
        Y.carrier, lift, T.coherence_at(carriers, Elem::tuple(std::move(up)))));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// function-set plumbing shared by the multicategory builders: a function is
// encoded as the tuple of its values over the sorted domain

inline Elem encode_fun(const SetMor& f) {
  std::vector<Elem> v;
  v.reserve(f.dom.size());
  for (const auto& e : f.dom) v.push_back(f(e));
  return Elem::tuple(std::move(v));
}

inline SetMor decode_fun(const SetObj& dom, const SetObj& cod, const Elem& v) {
  if (v.kind() != Elem::Kind::tuple || v.items().size() != dom.size())
    throw precondition_error("encoded function has the wrong width");
  SetMor f{dom, cod, {}};
  for (std::size_t i = 0; i < dom.size(); ++i) f.map.emplace(dom[i], v.items()[i]);
  return f;
}

inline SetObj fun_set(const SetObj& dom, const SetObj& cod, std::size_t cap = 100000) {
  std::vector<Elem> out;
  for (const auto& f : FinSetBase::hom_set(dom, cod, cap)) out.push_back(encode_fun(f));
  return make_set(std::move(out));
}

// Finite sets as a multicategory: multimaps (X_i)_i -> Y are functions from
// the product of the carriers, encoded as value tuples.  `admit` filters the
// hom sets; the algebra builder plugs the multimorphism test in here.
inline Multicat functions_multicat(
    const std::map<std::string, SetObj>& sets, std::string name,
    std::size_t max_hom = 100000,
    std::function<bool(const std::vector<std::string>&, const std::string&,
                       const SetMor&)> admit = {}) {
  auto S = std::make_shared<std::map<std::string, SetObj>>(sets);
  auto keep = std::make_shared<decltype(admit)>(std::move(admit));
  auto set_of = [S](const std::string& n) -> const SetObj& {
    auto it = S->find(n);
    if (it == S->end()) throw precondition_error("unknown object " + n);
    return it->second;
  };
  auto dom_of = [S, set_of](const std::vector<std::string>& src) {
    std::vector<SetObj> xs;
    xs.reserve(src.size());
    for (const auto& s : src) xs.push_back(set_of(s));
    return FinSetBase::product(xs);
  };
  Multicat X;
  X.name = std::move(name);
  for (const auto& [n, s] : *S) {
    (void)s;
    X.objects.push_back(n);
  }
  X.max_hom = max_hom;
  X.hom_fn = [keep, set_of, dom_of, max_hom](const std::vector<std::string>& src,
                                             const std::string& tgt) {
    SetObj dom = dom_of(src);
    std::vector<Elem> out;
    for (const auto& f : FinSetBase::hom_set(dom, set_of(tgt), max_hom))
      if (!*keep || (*keep)(src, tgt, f)) out.push_back(encode_fun(f));
    return out;
  };
  X.unit_fn = [dom_of](const std::string& x) {
    SetObj dom = dom_of({x});
    std::vector<Elem> v;
    v.reserve(dom.size());
    for (const auto& e : dom) v.push_back(e.items()[0]);
    return Elem::tuple(std::move(v));
  };
  X.compose_fn = [set_of, dom_of](const TypedMultimap& g,
                                     const std::vector<TypedMultimap>& fs) {
    SetMor gm = decode_fun(dom_of(g.src), set_of(g.tgt), g.val);
    std::vector<SetMor> fms;
    std::vector<std::string> src;
    for (const auto& f : fs) {
      fms.push_back(decode_fun(dom_of(f.src), set_of(f.tgt), f.val));
      src.insert(src.end(), f.src.begin(), f.src.end());
    }
    SetObj dom = dom_of(src);
    std::vector<Elem> v;
    v.reserve(dom.size());
    for (const auto& e : dom) {
      std::vector<Elem> mids;
      mids.reserve(fs.size());
      std::size_t at = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<Elem> block(e.items().begin() + static_cast<long>(at),
                                e.items().begin() + static_cast<long>(at + fs[i].src.size()));
        at += fs[i].src.size();
        mids.push_back(fms[i](Elem::tuple(std::move(block))));
      }
      v.push_back(gm(Elem::tuple(std::move(mids))));
    }
    return Elem::tuple(std::move(v));
  };
  X.swap_fn = [set_of, dom_of](const TypedMultimap& f, std::size_t k) {
    SetMor fm = decode_fun(dom_of(f.src), set_of(f.tgt), f.val);
    std::vector<std::string> swapped = f.src;
    std::swap(swapped[k], swapped[k + 1]);
    SetObj dom = dom_of(swapped);
    std::vector<Elem> v;
    v.reserve(dom.size());
    for (const auto& e : dom) {
      std::vector<Elem> back = e.items();
      std::swap(back[k], back[k + 1]);
      v.push_back(fm(Elem::tuple(std::move(back))));
    }
    return Elem::tuple(std::move(v));
  };
  return X;
}

inline Multicat sets_multicat(const std::map<std::string, SetObj>& sets,
                              std::string name, std::size_t max_hom = 100000) {
  return functions_multicat(sets, std::move(name), max_hom);
}

inline Multicat em_multicat(const SetMonad& T, const std::vector<TAlgebra>& algebras,
                            std::string name, std::size_t max_hom = 100000) {
  std::map<std::string, SetObj> sets;
  std::map<std::string, TAlgebra> by_name;
  for (const auto& a : algebras) {
    if (sets.count(a.name)) throw precondition_error("duplicate algebra name " + a.name);
    sets[a.name] = a.carrier;
    by_name[a.name] = a;
  }
  auto Tp = std::make_shared<SetMonad>(T);
  auto Ap = std::make_shared<std::map<std::string, TAlgebra>>(std::move(by_name));
  return functions_multicat(
      sets, std::move(name), max_hom,
      [Tp, Ap](const std::vector<std::string>& src, const std::string& tgt,
               const SetMor& f) {
        std::vector<TAlgebra> as;
        as.reserve(src.size());
        for (const auto& s : src) as.push_back(Ap->at(s));
        return is_multi_algebra_map(*Tp, as, Ap->at(tgt), f);
      });
}

// ---------------------------------------------------------------------------
// the forgetful multifunctor, T pushed to a multifunctor on plain sets, and
// the transformation between them whose components are the algebra actions

struct ForgetfulData {
  Multicat sets;                        // carriers and their T-images
  MultiFunctor forget;                  // algebra |-> carrier, maps unchanged
  MultiFunctor applied;                 // algebra |-> T(carrier), maps pushed through T
  std::map<std::string, Elem> actions;  // transformation components
};

inline ForgetfulData em_forgetful(const SetMonad& T,
                                  const std::vector<TAlgebra>& algebras,
                                  std::size_t max_hom = 100000) {
  std::map<std::string, SetObj> sets;
  std::map<std::string, TAlgebra> by_name;
  for (const auto& a : algebras) {
    sets[a.name] = a.carrier;
    sets["T(" + a.name + ")"] = T.carrier(a.carrier);
    by_name[a.name] = a;
  }
  ForgetfulData out;
  out.sets = sets_multicat(sets, "sets", max_hom);
  for (const auto& a : algebras) {
    out.forget.obj[a.name] = a.name;
    out.applied.obj[a.name] = "T(" + a.name + ")";
  }
  out.forget.map = [](const TypedMultimap& f) { return f; };
  auto Tp = std::make_shared<SetMonad>(T);
  auto Ap = std::make_shared<std::map<std::string, TAlgebra>>(by_name);
  out.applied.map = [Tp, Ap](const TypedMultimap& f) {
    std::vector<SetObj> carriers, tcarriers;
    std::vector<std::string> src;
    for (const auto& s : f.src) {
      carriers.push_back(Ap->at(s).carrier);
      tcarriers.push_back(Tp->carrier(carriers.back()));
      src.push_back("T(" + s + ")");
    }
    const TAlgebra& Y = Ap->at(f.tgt);
    SetMor fm = decode_fun(FinSetBase::product(carriers), Y.carrier, f.val);
    SetMor ey = Tp->unit(Y.carrier);
    std::map<Elem, Elem> lift;
    for (const auto& x : fm.dom) lift.emplace(x, ey(fm(x)));
    SetObj dom = FinSetBase::product(tcarriers);
    std::vector<Elem> v;
    v.reserve(dom.size());
    for (const auto& e : dom)
      v.push_back(Tp->extend(Y.carrier, lift, Tp->coherence_at(carriers, e)));
    return TypedMultimap{std::move(src), "T(" + f.tgt + ")", Elem::tuple(std::move(v))};
  };
  for (const auto& a : algebras) {
    SetObj dom = FinSetBase::product({T.carrier(a.carrier)});
    std::vector<Elem> v;
    v.reserve(dom.size());
    for (const auto& e : dom) v.push_back(a.action(e.items()[0]));
    out.actions[a.name] = Elem::tuple(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// pointwise algebra structure on a function set [X, Y]: the transpose of
// acting on values after evaluating, with the argument lifted by the unit

struct PointwiseHom {
  SetObj funs;                // encoded functions X -> Y
  SetObj dom;                 // product(funs, X) backing the evaluation
  SetMor rev;                 // evaluation (g, x) |-> g(x)
  SetMor eta_x;               // unit at X
  std::map<Elem, Elem> lift;  // seed for T(rev): e |-> eta_Y(rev(e))
};

inline PointwiseHom make_pointwise_hom(const SetMonad& T, const SetObj& X,
                                       const SetObj& Y, std::size_t cap = 100000) {
  PointwiseHom P;
  P.funs = fun_set(X, Y, cap);
  P.dom = FinSetBase::product({P.funs, X});
  P.rev = make_mor(P.dom, Y, [&X](const Elem& e) {
    return e.items()[0].items()[index_of(X, e.items()[1])];
  });
  P.eta_x = T.unit(X);
  for (const auto& e : P.dom) P.lift.emplace(e, T.eta(Y, P.rev(e)));
  return P;
}

// the pointwise action at one element of T(funs), as an encoded function
inline Elem pointwise_action_at(const SetMonad& T, const PointwiseHom& P,
                                const SetObj& X, const TAlgebra& Y, const Elem& G) {
  std::vector<Elem> v;
  v.reserve(X.size());
  for (const auto& x : X) {
    Elem u = T.coherence_at({P.funs, X}, Elem::tuple({G, P.eta_x(x)}));
    v.push_back(Y.action(T.extend(Y.carrier, P.lift, u)));
  }
  return Elem::tuple(std::move(v));
}

inline TAlgebra pointwise_hom_algebra(const SetMonad& T, const SetObj& X,
                                      const TAlgebra& Y, std::string name,
                                      std::size_t cap = 100000) {
  PointwiseHom P = make_pointwise_hom(T, X, Y.carrier, cap);
  TAlgebra out;
  out.name = std::move(name);
  out.carrier = P.funs;
  out.action = make_mor(T.carrier(P.funs), P.funs, [&](const Elem& G) {
    return pointwise_action_at(T, P, X, Y, G);
  });
  return out;
}

// the strength [X, Y] -> [T X, T Y]: push a function through T via the
// coherence, with the function slot lifted by the unit
inline SetMor t_hom_strength(const SetMonad& T, const SetObj& X, const SetObj& Y,
                             std::size_t cap = 100000) {
  SetObj funs = fun_set(X, Y, cap);
  SetObj tx = T.carrier(X), ty = T.carrier(Y);
  SetObj dom = FinSetBase::product({funs, X});
  SetMor rev = make_mor(dom, Y, [&X](const Elem& e) {
    return e.items()[0].items()[index_of(X, e.items()[1])];
  });
  std::map<Elem, Elem> lift;
  for (const auto& e : dom) lift.emplace(e, T.eta(Y, rev(e)));
  return make_mor(funs, fun_set(tx, ty, cap), [&](const Elem& g) {
    std::vector<Elem> v;
    v.reserve(tx.size());
    for (const auto& t : tx) {
      Elem u = T.coherence_at({funs, X}, Elem::tuple({T.eta(funs, g), t}));
      v.push_back(T.extend(Y, lift, u));
    }
    return Elem::tuple(std::move(v));
  });
}

// ---------------------------------------------------------------------------
// the hom algebra [A, B]: the subset of functions where precomposing with
// the action of A agrees with the strength followed by the action of B,
// carrying the pointwise structure (which must restrict, or we refuse)

inline TAlgebra hom_algebras(const SetMonad& T, const TAlgebra& A, const TAlgebra& B,
                             std::string name, std::size_t cap = 100000) {
  SetMor s = t_hom_strength(T, A.carrier, B.carrier, cap);
  SetObj ta = T.carrier(A.carrier);
  std::vector<Elem> keep;
  for (const auto& g : fun_set(A.carrier, B.carrier, cap)) {
    SetMor gm = decode_fun(A.carrier, B.carrier, g);
    const Elem& sg = s(g);
    bool ok = true;
    for (std::size_t i = 0; i < ta.size() && ok; ++i)
      ok = gm(A.action(ta[i])) == B.action(sg.items()[i]);
    if (ok) keep.push_back(g);
  }
  auto P = std::make_shared<PointwiseHom>(make_pointwise_hom(T, A.carrier, B.carrier, cap));
  TAlgebra H;
  H.name = std::move(name);
  H.carrier = make_set(std::move(keep));
  std::map<Elem, Elem> incl;
  for (const auto& g : H.carrier) incl.emplace(g, T.eta(P->funs, g));
  H.action = make_mor(T.carrier(H.carrier), H.carrier, [&](const Elem& G) {
    Elem v = pointwise_action_at(T, *P, A.carrier, B,
                                 T.extend(P->funs, incl, G));
    if (!contains(H.carrier, v))
      throw precondition_error("pointwise action escapes the hom equalizer");
    return v;
  });
  return H;
}

// first algebra isomorphism A -> B in enumeration order, if any
inline std::optional<SetMor> find_algebra_iso(const SetMonad& T, const TAlgebra& A,
                                              const TAlgebra& B,
                                              std::size_t cap = 100000) {
  if (A.carrier.size() != B.carrier.size()) return std::nullopt;
  for (const auto& f : FinSetBase::hom_set(A.carrier, B.carrier, cap)) {
    if (!is_bijection(f)) continue;
    if (is_algebra_map(T, A, B, f)) return f;
  }
  return std::nullopt;
}

// Hom objects and evaluation maps for a roster of algebras closed under hom
// formation up to isomorphism; refuses if some hom has no representative.
inline ClosedData em_closed_data(const SetMonad& T, const std::vector<TAlgebra>& algebras,
                                 std::size_t cap = 100000) {
  ClosedData cd;
  for (const auto& A : algebras)
    for (const auto& B : algebras) {
      TAlgebra H = hom_algebras(T, A, B, "[" + A.name + "," + B.name + "]", cap);
      const TAlgebra* match = nullptr;
      SetMor iso;
      for (const auto& C : algebras)
        if (auto m = find_algebra_iso(T, C, H, cap)) {
          match = &C;
          iso = *m;
          break;
        }
      if (!match)
        throw precondition_error("no representative for the hom of " + A.name +
                                 " and " + B.name);
      cd.hom[{A.name, B.name}] = match->name;
      SetObj dom = FinSetBase::product({match->carrier, A.carrier});
      std::vector<Elem> v;
      v.reserve(dom.size());
      for (const auto& e : dom)
        v.push_back(iso(e.items()[0]).items()[index_of(A.carrier, e.items()[1])]);
      cd.rev[{A.name, B.name}] = Elem::tuple(std::move(v));
    }
  return cd;
}

// ---------------------------------------------------------------------------
// the tensor algebra: quotient of the free algebra on the product of the
// carriers by the identifications "apply the actions, then generate" =
// "merge the formal layers through the coherence"

struct TensorResult {
  TAlgebra algebra;
  SetMor q;          // free carrier -> tensor carrier (empty when not materialized)
  SetMor universal;  // product of carriers -> tensor carrier
  bool split = false;
  // whether the plain set coequalizer of the two legs already gives the
  // tensor carrier; unset when the domain of the legs was too big to sweep
  std::optional<bool> underlying_preserved;
  Report checks;
};

// factors all free: the coequalizer splits and the tensor is free on the
// product of the bases, with the universal multimap the coherence itself
inline TensorResult tensor_algebras_split(const SetMonad& T,
                                          const std::vector<TAlgebra>& As,
                                          std::string name,
                                          std::size_t bound = 65536) {
  std::vector<SetObj> bases, carriers;
  for (const auto& A : As) {
    if (!A.free_base) throw precondition_error(A.name + " has no free presentation");
    if (!(A.carrier == T.carrier(*A.free_base)))
      throw precondition_error(A.name + " is not free on its recorded base");
    bases.push_back(*A.free_base);
    carriers.push_back(A.carrier);
  }
  SetObj wb = FinSetBase::product(bases);
  TensorResult R;
  R.split = true;
  R.algebra = free_algebra(T, std::move(name), wb);
  SetObj W = FinSetBase::product(carriers);
  std::map<Elem, Elem> phi;
  for (const auto& w : W) phi.emplace(w, T.coherence_at(bases, w));
  R.universal = SetMor{W, R.algebra.carrier, phi};
  {
    auto& c = R.checks.add("unit-reflexivity");
    for (const auto& w : W) {
      ++c.instances;
      std::vector<Elem> up;
      up.reserve(carriers.size());
      for (std::size_t i = 0; i < carriers.size(); ++i)
        up.push_back(T.eta(carriers[i], w.items()[i]));
      if (!(T.coherence_at(carriers, Elem::tuple(std::move(up))) == T.eta(W, w)))
        c.fail_case("coherence of units is not the unit at " + w.str());
    }
  }
  {
    auto& c = R.checks.add("coequalizer-map");
    try {
      SetObj B = T.carrier(W);
      guard(B.size() <= bound, "free carrier exceeds the bound");
      // mu . T(phi) is the extension of phi itself
      R.q = make_mor(B, R.algebra.carrier, [&](const Elem& b) {
        return T.extend(wb, phi, b);
      });
      c.instances = B.size();
      std::vector<SetObj> tcarriers;
      for (const auto& x : carriers) tcarriers.push_back(T.carrier(x));
      SetObj G = FinSetBase::product(tcarriers);
      guard(G.size() <= bound, "doubled generators exceed the bound");
      for (const auto& g : G) {
        std::vector<Elem> applied;
        applied.reserve(As.size());
        for (std::size_t i = 0; i < As.size(); ++i)
          applied.push_back(As[i].action(g.items()[i]));
        Elem lhs = T.eta(W, Elem::tuple(std::move(applied)));
        Elem rhs = T.coherence_at(carriers, g);
        if (!(R.q(lhs) == R.q(rhs)))
          c.fail_case("legs disagree after the quotient at " + g.str());
      }
    } catch (const size_guard_error&) {
      c.exhausted = true;
    }
  }
  return R;
}

// general case: close a congruence on the free algebra over the product of
// the carriers.  Identifications propagate through every one-slot context
// built from the binary operations of the theory (terms over two letters);
// a few full verification sweeps then certify the partition is compatible.
inline TensorResult tensor_algebras_generic(const SetMonad& T,
                                            const std::vector<TAlgebra>& As,
                                            std::string name,
                                            std::size_t bound = 4096,
                                            std::size_t max_sweeps = 8) {
  std::vector<SetObj> carriers, tcarriers;
  for (const auto& A : As) {
    carriers.push_back(A.carrier);
    tcarriers.push_back(T.carrier(A.carrier));
  }
  SetObj W = FinSetBase::product(carriers);
  SetObj B = T.carrier(W);
  guard(B.size() <= bound, "free carrier exceeds the bound");
  SetObj G = FinSetBase::product(tcarriers);
  guard(G.size() <= bound, "doubled generators exceed the bound");

  TensorResult R;
  std::vector<std::size_t> parent(B.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };

  std::vector<std::pair<std::size_t, std::size_t>> queue;
  {
    auto& c = R.checks.add("generator-identifications");
    for (const auto& g : G) {
      ++c.instances;
      std::vector<Elem> applied;
      applied.reserve(As.size());
      for (std::size_t i = 0; i < As.size(); ++i)
        applied.push_back(As[i].action(g.items()[i]));
      queue.emplace_back(index_of(B, T.eta(W, Elem::tuple(std::move(applied)))),
                         index_of(B, T.coherence_at(carriers, g)));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs = queue;  // for the set-level comparison

  // binary operations: terms of the theory over a two-letter set, tabulated
  // as index tables over B when that fits, else evaluated on demand.  A
  // declared generating set suffices: the congruence is stable under every
  // term once it is stable under generators applied against constants.
  SetObj two = atoms({"v1", "v2"});
  std::vector<Elem> ops = T.binary_basis ? T.binary_basis(two) : T.carrier(two);
  auto apply_op = [&](const Elem& t, const Elem& b1, const Elem& b2) {
    std::map<Elem, Elem> g;
    g.emplace(two[0], b1);
    g.emplace(two[1], b2);
    return T.extend(W, g, t);
  };
  const std::size_t dense_budget = 1u << 24;
  bool dense = ops.size() * B.size() * B.size() <= dense_budget;
  std::vector<std::vector<std::size_t>> table;
  if (dense) {
    table.assign(ops.size(), std::vector<std::size_t>(B.size() * B.size()));
    for (std::size_t k = 0; k < ops.size(); ++k)
      for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j)
          table[k][i * B.size() + j] = index_of(B, apply_op(ops[k], B[i], B[j]));
  }
  auto op_at = [&](std::size_t k, std::size_t i, std::size_t j) {
    if (dense) return table[k][i * B.size() + j];
    return index_of(B, apply_op(ops[k], B[i], B[j]));
  };

  // worklist phase: when two classes merge, re-run every operation against
  // the current representatives and enqueue the induced identifications
  while (!queue.empty()) {
    auto [a, b] = queue.back();
    queue.pop_back();
    a = find(a);
    b = find(b);
    if (a == b) continue;
    parent[b] = a;
    for (std::size_t k = 0; k < ops.size(); ++k)
      for (std::size_t r = 0; r < B.size(); ++r) {
        if (find(r) != r) continue;
        queue.emplace_back(op_at(k, a, r), op_at(k, b, r));
        queue.emplace_back(op_at(k, r, a), op_at(k, r, b));
      }
  }

  // verification sweeps: replace each argument by its representative in
  // every slot of every operation and demand the class is unchanged; merge
  // and repeat on violations, so a clean pass certifies compatibility
  {
    auto& c = R.checks.add("congruence-sweeps");
    bool clean = false;
    for (std::size_t s = 0; s < max_sweeps && !clean; ++s) {
      ++c.instances;
      clean = true;
      for (std::size_t k = 0; k < ops.size(); ++k)
        for (std::size_t i = 0; i < B.size(); ++i) {
          std::size_t ri = find(i);
          if (ri == i) continue;
          for (std::size_t j = 0; j < B.size(); ++j) {
            std::size_t x = op_at(k, i, j), y = op_at(k, ri, j);
            if (find(x) != find(y)) {
              parent[find(x)] = find(y);
              clean = false;
            }
            x = op_at(k, j, i);
            y = op_at(k, j, ri);
            if (find(x) != find(y)) {
              parent[find(x)] = find(y);
              clean = false;
            }
          }
        }
    }
    if (!clean) c.exhausted = true;
  }

  // carrier: the least element of each class represents it
  std::map<std::size_t, Elem> least;
  for (std::size_t i = 0; i < B.size(); ++i) {
    std::size_t r = find(i);
    if (!least.count(r)) least.emplace(r, B[i]);
  }
  std::vector<Elem> reps;
  reps.reserve(least.size());
  for (const auto& [r, e] : least) {
    (void)r;
    reps.push_back(e);
  }
  SetObj Q = make_set(std::move(reps));
  R.q = make_mor(B, Q, [&](const Elem& b) { return least.at(find(index_of(B, b))); });
  R.universal = make_mor(W, Q, [&](const Elem& w) { return R.q(T.eta(W, w)); });
  R.algebra.name = std::move(name);
  R.algebra.carrier = Q;
  {
    std::map<Elem, Elem> incl;
    for (const auto& e : Q) incl.emplace(e, e);  // representatives live in T W
    R.algebra.action = make_mor(T.carrier(Q), Q, [&](const Elem& t) {
      return R.q(T.extend(W, incl, t));
    });
  }
  {
    auto& c = R.checks.add("coequalizes-generators");
    for (const auto& [a, b] : pairs) {
      ++c.instances;
      if (!(R.q(B[a]) == R.q(B[b])))
        c.fail_case("generator pair split by the quotient");
    }
  }
  {
    auto& c = R.checks.add("unit-reflexivity");
    for (const auto& w : W) {
      ++c.instances;
      std::vector<Elem> up;
      up.reserve(carriers.size());
      for (std::size_t i = 0; i < carriers.size(); ++i)
        up.push_back(T.eta(carriers[i], w.items()[i]));
      if (!(T.coherence_at(carriers, Elem::tuple(std::move(up))) == T.eta(W, w)))
        c.fail_case("coherence of units is not the unit at " + w.str());
    }
  }
  // record whether the plain set coequalizer of the two legs (equivalence
  // closure over the whole doubled free algebra) already equals the class
  // partition; this is observed per instance, never assumed
  try {
    SetObj A2 = T.carrier(G);
    guard(A2.size() <= bound, "doubled free algebra exceeds the bound");
    std::map<Elem, Elem> ulift, phit;
    {
      for (const auto& g : G) {
        std::vector<Elem> applied;
        applied.reserve(As.size());
        for (std::size_t i = 0; i < As.size(); ++i)
          applied.push_back(As[i].action(g.items()[i]));
        ulift.emplace(g, T.eta(W, Elem::tuple(std::move(applied))));
        phit.emplace(g, T.coherence_at(carriers, g));
      }
    }
    std::vector<std::size_t> p2(B.size());
    std::iota(p2.begin(), p2.end(), 0);
    auto find2 = [&p2](std::size_t a) {
      while (p2[a] != a) {
        p2[a] = p2[p2[a]];
        a = p2[a];
      }
      return a;
    };
    for (const auto& e : A2) {
      std::size_t a = find2(index_of(B, T.extend(W, ulift, e)));
      std::size_t b = find2(index_of(B, T.extend(W, phit, e)));
      if (a != b) p2[a] = b;
    }
    std::map<std::size_t, std::size_t> classes;
    bool same = true;
    for (std::size_t i = 0; i < B.size() && same; ++i) {
      auto [it, fresh] = classes.emplace(find2(i), find(i));
      if (!fresh && it->second != find(i)) same = false;
      if (fresh) {
        for (const auto& [k, v] : classes)
          if (k != it->first && v == find(i)) same = false;
      }
    }
    R.underlying_preserved = same;
  } catch (const size_guard_error&) {
    R.underlying_preserved = std::nullopt;
  }
  return R;
}

inline TensorResult tensor_algebras(const SetMonad& T, const std::vector<TAlgebra>& As,
                                    std::string name, std::size_t bound = 65536) {
  bool all_free = true;
  for (const auto& A : As)
    if (!A.free_base) all_free = false;
  if (all_free) {
    TensorResult R = tensor_algebras_split(T, As, std::move(name), bound);
    // split coequalizers are absolute, so the set level agrees by construction
    R.underlying_preserved = true;
    return R;
  }
  return tensor_algebras_generic(T, As, std::move(name), bound);
}

// ---------------------------------------------------------------------------
// the universal property, checked by descent: a multimorphism factors
// through the tensor iff its mate out of the free algebra is constant on
// the fibers of q, and then the factor is unique and an algebra map

struct TensorFactorization {
  bool ok = false;
  std::string why;
  SetMor factor;  // tensor carrier -> Z when ok
};

inline TensorFactorization factor_through_tensor(const SetMonad& T,
                                                 const TensorResult& R,
                                                 const TAlgebra& Z, const SetMor& m) {
  if (R.q.map.empty() && !R.algebra.carrier.empty())
    throw precondition_error("quotient map was not materialized");
  std::map<Elem, Elem> lift;
  for (const auto& x : m.dom) lift.emplace(x, T.eta(Z.carrier, m(x)));
  std::map<Elem, Elem> val;
  for (const auto& b : R.q.dom) {
    Elem mb = Z.action(T.extend(Z.carrier, lift, b));
    auto [it, fresh] = val.emplace(R.q(b), mb);
    if (!fresh && !(it->second == mb))
      return {false, "mate is not constant on a fiber of the quotient", {}};
  }
  TensorFactorization F;
  F.factor = SetMor{R.algebra.carrier, Z.carrier, std::move(val)};
  for (const auto& w : R.universal.dom)
    if (!(F.factor(R.universal(w)) == m(w)))
      return {false, "factor does not recover the multimap", {}};
  if (!is_algebra_map(T, R.algebra, Z, F.factor))
    return {false, "factor is not an algebra map", {}};
  F.ok = true;
  return F;
}

// the image of the universal multimap generates the tensor: close it under
// the binary operations of the theory and compare sizes
inline bool tensor_generated_by_universal(const SetMonad& T, const TensorResult& R) {
  const SetObj& Q = R.algebra.carrier;
  SetObj two = atoms({"v1", "v2"});
  std::vector<Elem> ops = T.binary_basis ? T.binary_basis(two) : T.carrier(two);
  std::set<Elem> have;
  for (const auto& w : R.universal.dom) have.insert(R.universal(w));
  bool grew = true;
  while (grew && have.size() < Q.size()) {
    grew = false;
    std::vector<Elem> snapshot(have.begin(), have.end());
    for (const auto& t : ops)
      for (const auto& a : snapshot)
        for (const auto& b : snapshot) {
          std::map<Elem, Elem> g;
          g.emplace(two[0], T.eta(Q, a));
          g.emplace(two[1], T.eta(Q, b));
          if (have.insert(R.algebra.action(T.extend(Q, g, t))).second) grew = true;
        }
  }
  return have.size() == Q.size();
}

}  // namespace freeprod
