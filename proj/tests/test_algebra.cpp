#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "freeprod/algebra.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

// Read the module tables off an algebra of the linear-combination monad by
// feeding it single- and two-term combinations.  Works for any candidate
// action, valid or not, so both sides of an equivalence test see the same
// raw data.
oracle::OModule module_view(const FiniteCommRing& R, const TAlgebra& A) {
  oracle::OModule m;
  m.n = A.carrier.size();
  auto combo = [&](const std::map<std::size_t, std::string>& coeffs) {
    std::vector<Elem> t(m.n, Elem::atom(R.zero));
    for (const auto& [k, c] : coeffs) t[k] = Elem::atom(c);
    return A.action(Elem::tuple(std::move(t)));
  };
  auto idx = [&](const Elem& e) { return index_of(A.carrier, e); };
  m.zero = idx(combo({}));
  m.add.assign(m.n, std::vector<std::size_t>(m.n, 0));
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      m.add[i][j] = i == j ? idx(combo({{i, R.plus(R.one, R.one)}}))
                           : idx(combo({{i, R.one}, {j, R.one}}));
  for (const auto& r : R.elems) {
    std::vector<std::size_t> col(m.n);
    for (std::size_t i = 0; i < m.n; ++i) col[i] = idx(combo({{i, r}}));
    m.scale[r] = col;
  }
  return m;
}

}  // namespace

TEST_CASE("modular arithmetic validates as a ring and corrupted tables fail") {
  REQUIRE(validate_ring(zmod_ring(1)).ok());
  REQUIRE(validate_ring(zmod_ring(2)).ok());
  REQUIRE(validate_ring(zmod_ring(4)).ok());
  REQUIRE(validate_ring(zmod_ring(6)).ok());

  FiniteCommRing bad = zmod_ring(6);
  bad.mul[{"2", "3"}] = "1";  // should be 0
  bad.mul[{"3", "2"}] = "1";
  REQUIRE_FALSE(validate_ring(bad).ok());

  FiniteCommRing gap = zmod_ring(2);
  gap.add.erase({"1", "1"});
  Report rep = validate_ring(gap);
  REQUIRE_FALSE(rep.ok());
  REQUIRE(rep.checks.front().verdict == Verdict::fail);  // caught at the table level
}

TEST_CASE("linear combinations over a finite ring form a monoidal monad") {
  SetObj none, one = atoms({"a"}), two = atoms({"a", "b"});

  SetMonad T2 = rmodule_monad(zmod_ring(2));
  REQUIRE(T2.carrier(none).size() == 1);
  REQUIRE(T2.carrier(one).size() == 2);
  REQUIRE(T2.carrier(two).size() == 4);
  Report rep2 = validate_set_monad(T2, {none, one, two});
  CHECK(rep2.ok());

  SetMonad T4 = rmodule_monad(zmod_ring(4));
  REQUIRE(T4.carrier(two).size() == 16);
  Report rep4 = validate_set_monad(T4, {one, two});
  CHECK(rep4.ok());
  CHECK(rep4.exhausted());  // triple carriers over Z4 are out of reach

  Report repid = validate_set_monad(identity_monad(), {none, one, two});
  CHECK(repid.ok());
  CHECK_FALSE(repid.exhausted());
}

TEST_CASE("the coherence on two singletons is the multiplication table") {
  for (std::size_t n : {2u, 4u, 6u}) {
    FiniteCommRing R = zmod_ring(n);
    SetMonad T = rmodule_monad(R);
    SetObj x = atoms({"p"}), y = atoms({"q"});
    for (const auto& a : R.elems)
      for (const auto& b : R.elems) {
        Elem lhs = T.coherence_at(
            {x, y}, Elem::tuple({Elem::tuple({Elem::atom(a)}),
                                 Elem::tuple({Elem::atom(b)})}));
        REQUIRE(lhs == Elem::tuple({Elem::atom(R.times(a, b))}));
      }
  }
}

TEST_CASE("algebras of the combination monad are exactly module structures") {
  FiniteCommRing F2 = zmod_ring(2);
  SetMonad T = rmodule_monad(F2);
  oracle::ORing OR2 = oracle::ozmod(2);

  SECTION("exhaustive on a two-element carrier") {
    SetObj c = atoms({"x", "y"});
    SetObj tc = T.carrier(c);
    std::size_t algebras = 0, modules = 0;
    for (const auto& f : FinSetBase::hom_set(tc, c)) {
      TAlgebra A{"cand", c, f, {}};
      Report rep = validate_algebra(T, A);
      REQUIRE_FALSE(rep.exhausted());  // small enough to decide outright
      bool alg = rep.ok();
      bool mod = oracle::is_module(OR2, module_view(F2, A));
      REQUIRE(alg == mod);
      algebras += alg;
      modules += mod;
    }
    REQUIRE(algebras == 2);  // one structure per choice of zero element
    REQUIRE(modules == 2);
  }

  SECTION("the free algebra on two generators is a module") {
    TAlgebra F = free_algebra(T, "f22", atoms({"u", "v"}));
    CHECK(validate_algebra(T, F).ok());
    REQUIRE(oracle::is_module(OR2, module_view(F2, F)));
  }

  SECTION("a four-element cyclic addition is not an algebra over the field") {
    SetObj c4 = atoms({"e0", "e1", "e2", "e3"});
    SetObj tc4 = T.carrier(c4);
    // pretend the carrier is Z4: combinations evaluate by summing indices
    SetMor act = make_mor(tc4, c4, [&](const Elem& t) {
      std::size_t s = 0;
      for (std::size_t i = 0; i < 4; ++i)
        if (t.items()[i].name() == "1") s += i;
      return c4[s % 4];
    });
    TAlgebra A{"z4", c4, act, {}};
    // the defect only shows up under stacked combinations, so the sweep needs
    // room for the full double carrier
    Report bad = validate_algebra(T, A, 70000, 70000);
    REQUIRE_FALSE(bad.ok());
    REQUIRE_FALSE(bad.exhausted());
    REQUIRE_FALSE(oracle::is_module(OR2, module_view(F2, A)));
  }
}

TEST_CASE("multimorphisms are exactly the maps linear in each variable") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));
  std::vector<TAlgebra> MM{M, M};
  SetObj dom = FinSetBase::product({M.carrier, M.carrier});

  std::size_t multi = 0;
  for (const auto& f : FinSetBase::hom_set(dom, M.carrier)) {
    bool joint = is_multi_algebra_map(T, MM, M, f);
    bool varwise = is_algebra_map_in_variable(T, MM, M, f, 0) &&
                   is_algebra_map_in_variable(T, MM, M, f, 1);
    REQUIRE(joint == varwise);
    multi += joint;
  }
  REQUIRE(multi == 2);  // zero and multiplication

  // a(1 + b) is additive in the first slot only
  SetMor aff = make_mor(dom, M.carrier, [&](const Elem& e) {
    const std::string& a = e.items()[0].items()[0].name();
    const std::string& b = e.items()[1].items()[0].name();
    return Elem::tuple({Elem::atom(a == "1" && b == "0" ? "1" : "0")});
  });
  REQUIRE(is_algebra_map_in_variable(T, MM, M, aff, 0));
  REQUIRE_FALSE(is_algebra_map_in_variable(T, MM, M, aff, 1));
  REQUIRE_FALSE(is_multi_algebra_map(T, MM, M, aff));

  // with one argument both notions collapse to plain algebra morphisms
  std::vector<TAlgebra> just{M};
  SetObj dom1 = FinSetBase::product({M.carrier});
  for (const auto& f : FinSetBase::hom_set(dom1, M.carrier)) {
    SetMor plain = make_mor(M.carrier, M.carrier, [&](const Elem& e) {
      return f(Elem::tuple({e}));
    });
    bool joint = is_multi_algebra_map(T, just, M, f);
    REQUIRE(joint == is_algebra_map_in_variable(T, just, M, f, 0));
    REQUIRE(joint == is_algebra_map(T, M, M, plain));
  }
}

TEST_CASE("algebra multimaps form a symmetric multicategory over the carriers") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra Z = free_algebra(T, "z0", SetObj{});
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));
  Multicat em = em_multicat(T, {Z, M}, "em-f2");

  REQUIRE(validate_symmetric_multicat(em).ok());
  REQUIRE(em.hom({}, "f2").size() == 2);            // nullary maps = elements
  REQUIRE(em.hom({}, "z0").size() == 1);
  REQUIRE(em.hom({"f2"}, "f2").size() == 2);        // zero and identity
  REQUIRE(em.hom({"f2", "f2"}, "f2").size() == 2);  // zero and multiplication
  REQUIRE(em.hom({"z0", "f2"}, "f2").size() == 1);  // everything collapses

  ForgetfulData F = em_forgetful(T, {Z, M});
  REQUIRE(check_multifunctor(em, F.sets, F.forget).ok());
  REQUIRE(check_multifunctor(em, F.sets, F.applied).ok());
  REQUIRE(check_multinatural(em, F.sets, F.applied, F.forget, F.actions).ok());

  // breaking one action component must break naturality
  ForgetfulData bent = F;
  std::vector<Elem> v = bent.actions["f2"].items();
  std::swap(v[0], v[1]);
  bent.actions["f2"] = Elem::tuple(std::move(v));
  REQUIRE_FALSE(check_multinatural(em, bent.sets, bent.applied, bent.forget,
                                   bent.actions)
                    .ok());
}

TEST_CASE("pointwise structure on a function set is the module of functions") {
  FiniteCommRing F2 = zmod_ring(2);
  SetMonad T = rmodule_monad(F2);
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));
  oracle::ORing OR2 = oracle::ozmod(2);

  SetObj X = atoms({"p", "q"});
  TAlgebra H = pointwise_hom_algebra(T, X, M, "[X,f2]");
  REQUIRE(H.carrier.size() == 4);
  CHECK(validate_algebra(T, H).ok());

  // tables agree with the componentwise module built from M's own tables
  oracle::OModule mm = module_view(F2, M);
  oracle::OModule mh = module_view(F2, H);
  REQUIRE(oracle::is_module(OR2, mh));
  auto fn_at = [&](std::size_t g, std::size_t x) {
    return index_of(M.carrier, H.carrier[g].items()[x]);
  };
  auto fn_of = [&](std::size_t a, std::size_t b) {
    return index_of(H.carrier, Elem::tuple({M.carrier[a], M.carrier[b]}));
  };
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h)
      REQUIRE(mh.add[g][h] == fn_of(mm.add[fn_at(g, 0)][fn_at(h, 0)],
                                    mm.add[fn_at(g, 1)][fn_at(h, 1)]));
  for (const auto& r : F2.elems)
    for (std::size_t g = 0; g < 4; ++g)
      REQUIRE(mh.scale.at(r)[g] == fn_of(mm.scale.at(r)[fn_at(g, 0)],
                                         mm.scale.at(r)[fn_at(g, 1)]));

  // a full associativity sweep is feasible over a one-point domain
  SetObj pt = atoms({"p"});
  TAlgebra Hp = pointwise_hom_algebra(T, pt, M, "[p,f2]");
  Report rp = validate_algebra(T, Hp);
  REQUIRE(rp.ok());
  REQUIRE_FALSE(rp.exhausted());

  // the two comparison maps out of the function module land in the pointwise
  // algebra on functions T A -> Y; both are morphisms of pointwise algebras,
  // and the hom algebra is exactly the set where they agree
  TAlgebra Z = free_algebra(T, "z0", SetObj{});
  SetObj tz = T.carrier(Z.carrier);
  TAlgebra PZ = pointwise_hom_algebra(T, Z.carrier, M, "[z,f2]");
  TAlgebra PTZ = pointwise_hom_algebra(T, tz, M, "[Tz,f2]");
  SetMor s = t_hom_strength(T, Z.carrier, M.carrier);
  SetMor pre = make_mor(PZ.carrier, PTZ.carrier, [&](const Elem& g) {
    return encode_fun(FinSetBase::compose(
        decode_fun(Z.carrier, M.carrier, g), Z.action));
  });
  SetMor post = make_mor(PZ.carrier, PTZ.carrier, [&](const Elem& g) {
    std::vector<Elem> vals;
    for (const auto& v : s(g).items()) vals.push_back(M.action(v));
    return Elem::tuple(std::move(vals));
  });
  REQUIRE(is_algebra_map(T, PZ, PTZ, pre));
  REQUIRE(is_algebra_map(T, PZ, PTZ, post));
  SetObj agree;
  for (const auto& g : PZ.carrier)
    if (pre(g) == post(g)) agree.push_back(g);
  REQUIRE(agree == hom_algebras(T, Z, M, "[z0,f2]").carrier);
}

TEST_CASE("the hom algebra is the equalizer inside the function module") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra Z = free_algebra(T, "z0", SetObj{});
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));

  TAlgebra H = hom_algebras(T, M, M, "[f2,f2]");
  REQUIRE(H.carrier.size() == 2);  // a proper subset of the 4 functions
  REQUIRE(fun_set(M.carrier, M.carrier).size() == 4);
  REQUIRE(validate_algebra(T, H).ok());
  REQUIRE(contains(H.carrier, encode_fun(FinSetBase::identity(M.carrier))));
  Elem zero = Elem::tuple({Elem::atom("0")});
  REQUIRE(contains(H.carrier, Elem::tuple({zero, zero})));

  // hom out of the free algebra on a point recovers the target
  TAlgebra I = free_algebra(T, "unit", atoms({"i"}));
  TAlgebra HY = hom_algebras(T, I, M, "[unit,f2]");
  REQUIRE(HY.carrier.size() == M.carrier.size());
  REQUIRE(find_algebra_iso(T, HY, M).has_value());

  // morphisms into the hom correspond to two-variable multimaps
  TAlgebra W = free_algebra(T, "f22", atoms({"u", "v"}));
  for (const TAlgebra* Zp : {&Z, &M, &W}) {
    std::size_t into_hom = 0;
    for (const auto& f : FinSetBase::hom_set(Zp->carrier, H.carrier))
      into_hom += is_algebra_map(T, *Zp, H, f);
    std::size_t two_var = 0;
    SetObj dom = FinSetBase::product({Zp->carrier, M.carrier});
    for (const auto& f : FinSetBase::hom_set(dom, M.carrier))
      two_var += is_multi_algebra_map(T, {*Zp, M}, M, f);
    REQUIRE(into_hom == two_var);
  }
}

TEST_CASE("tensors of free algebras are free on the product of the bases") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra M1 = free_algebra(T, "m1", atoms({"a"}));
  TAlgebra M2 = free_algebra(T, "m2", atoms({"u", "v"}));

  TensorResult R11 = tensor_algebras(T, {M1, M1}, "m1xm1", 4096);
  REQUIRE(R11.split);
  REQUIRE(R11.checks.ok());
  REQUIRE(R11.algebra.carrier.size() == 2);
  REQUIRE(R11.underlying_preserved.value());
  REQUIRE(validate_algebra(T, R11.algebra).ok());

  TensorResult R12 = tensor_algebras(T, {M1, M2}, "m1xm2", 4096);
  REQUIRE(R12.algebra.carrier.size() == 4);
  REQUIRE(R12.checks.ok());
  REQUIRE_FALSE(R12.checks.exhausted());

  TensorResult R22 = tensor_algebras(T, {M2, M2}, "m2xm2", 4096);
  REQUIRE(R22.split);
  REQUIRE(R22.algebra.carrier.size() == 16);
  REQUIRE(R22.checks.ok());
  REQUIRE(R22.checks.exhausted());  // the doubled free carrier is out of budget
  REQUIRE(R22.universal.map.size() == 16);

  // the universal multimap is the coherence: on a pair of one-generator
  // factors it is the multiplication table again
  FiniteCommRing F2 = zmod_ring(2);
  for (const auto& w : R11.universal.dom)
    REQUIRE(R11.universal(w) ==
            Elem::tuple({Elem::atom(F2.times(w.items()[0].items()[0].name(),
                                             w.items()[1].items()[0].name()))}));
}

TEST_CASE("maps out of the tensor are exactly the multimorphisms") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra M1 = free_algebra(T, "m1", atoms({"a"}));

  TensorResult R = tensor_algebras(T, {M1, M1}, "m1xm1", 65536);
  REQUIRE(tensor_generated_by_universal(T, R));
  REQUIRE(R.underlying_preserved.value());

  SetObj dom = FinSetBase::product({M1.carrier, M1.carrier});
  std::size_t multi = 0, factored = 0;
  for (const auto& f : FinSetBase::hom_set(dom, M1.carrier)) {
    bool joint = is_multi_algebra_map(T, {M1, M1}, M1, f);
    TensorFactorization F = factor_through_tensor(T, R, M1, f);
    REQUIRE(F.ok == joint);
    multi += joint;
    factored += F.ok;
    if (F.ok)
      for (const auto& w : dom) REQUIRE(F.factor(R.universal(w)) == f(w));
  }
  REQUIRE(multi == 2);
  std::size_t direct = 0;
  for (const auto& g : FinSetBase::hom_set(R.algebra.carrier, M1.carrier))
    direct += is_algebra_map(T, R.algebra, M1, g);
  REQUIRE(direct == factored);

  // the generic engine agrees with the split form on the same input
  TAlgebra M1p = M1;
  M1p.free_base.reset();
  TensorResult G = tensor_algebras(T, {M1p, M1p}, "generic", 65536);
  REQUIRE_FALSE(G.split);
  REQUIRE(G.checks.ok());
  REQUIRE_FALSE(G.checks.exhausted());
  REQUIRE(G.algebra.carrier.size() == R.algebra.carrier.size());
  REQUIRE(G.underlying_preserved.value());
  REQUIRE(find_algebra_iso(T, G.algebra, R.algebra).has_value());
}

TEST_CASE("identity-monad tensors are cartesian products") {
  SetMonad I = identity_monad();
  SetObj a = atoms({"0", "1"}), b = atoms({"x", "y", "z"});
  TAlgebra S2{"s2", a, FinSetBase::identity(a), {}};
  TAlgebra S3{"s3", b, FinSetBase::identity(b), {}};

  TensorResult R = tensor_algebras(I, {S2, S3}, "s2xs3");
  REQUIRE_FALSE(R.split);
  REQUIRE(R.checks.ok());
  REQUIRE(R.algebra.carrier == FinSetBase::product({a, b}));
  REQUIRE(R.underlying_preserved.value());
  REQUIRE(tensor_generated_by_universal(I, R));

  // with free presentations attached the split path gives the same carrier
  TensorResult S = tensor_algebras(I, {free_algebra(I, "s2", a),
                                       free_algebra(I, "s3", b)},
                                   "s2xs3");
  REQUIRE(S.split);
  REQUIRE(S.algebra.carrier == R.algebra.carrier);
}

TEST_CASE("the empty tensor is the free algebra on a point") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TensorResult R = tensor_algebras(T, {}, "unit");
  REQUIRE(R.split);
  REQUIRE(R.checks.ok());
  REQUIRE(R.algebra.carrier.size() == 2);
  REQUIRE(R.universal.map.size() == 1);
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));
  REQUIRE(find_algebra_iso(T, R.algebra, M).has_value());
  // the point lands on the generator, not the zero
  Elem at = R.universal(Elem::tuple({}));
  REQUIRE(at == T.unit(FinSetBase::terminal())(Elem::tuple({})));
}

TEST_CASE("the two-by-two tensor classifies bilinear maps") {
  FiniteCommRing F2 = zmod_ring(2);
  SetMonad T = rmodule_monad(F2);
  oracle::ORing OR2 = oracle::ozmod(2);
  TAlgebra M1 = free_algebra(T, "m1", atoms({"a"}));
  TAlgebra M2 = free_algebra(T, "m2", atoms({"u", "v"}));

  TensorResult R = tensor_algebras(T, {M2, M2}, "m2xm2", 4096);
  oracle::OModule vm2 = module_view(F2, M2);
  oracle::OModule vm1 = module_view(F2, M1);
  REQUIRE(oracle::is_module(OR2, vm2));

  auto brute = oracle::bilinear_maps(OR2, vm2, vm2, vm1);
  std::set<std::vector<std::size_t>> expect(brute.begin(), brute.end());
  REQUIRE(expect.size() == 16);

  // postcompose the universal multimap with every linear map off the tensor
  std::set<std::vector<std::size_t>> got;
  const SetObj& base = R.algebra.free_base.value();
  for (const auto& gamma : FinSetBase::hom_set(base, M1.carrier)) {
    SetMor eg = T.unit(M1.carrier);
    std::map<Elem, Elem> lift;
    for (const auto& x : base) lift.emplace(x, eg(gamma(x)));
    std::vector<std::size_t> tbl;
    tbl.reserve(R.universal.dom.size());
    for (const auto& w : R.universal.dom)
      tbl.push_back(index_of(
          M1.carrier,
          M1.action(T.extend(M1.carrier, lift, R.universal(w)))));
    got.insert(std::move(tbl));
  }
  REQUIRE(got.size() == 16);
  REQUIRE(got == expect);
}

TEST_CASE("a tensor over the integers mod four collapses torsion") {
  FiniteCommRing Z4 = zmod_ring(4);
  SetMonad T = rmodule_monad(Z4);

  // the two-element quotient: scalars act through their residue
  SetObj c2 = atoms({"e0", "e1"});
  SetMor act = make_mor(T.carrier(c2), c2, [&](const Elem& t) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::string& c = t.items()[i].name();
      s += (c == "1" || c == "3") ? i : 0;
    }
    return c2[s % 2];
  });
  TAlgebra Q{"z2", c2, act, {}};
  Report rq = validate_algebra(T, Q);
  REQUIRE(rq.ok());
  REQUIRE(rq.exhausted());  // the doubled carrier over Z4 is unreachable

  TensorResult R = tensor_algebras(T, {Q, Q}, "z2xz2", 4096);
  REQUIRE_FALSE(R.split);
  REQUIRE(R.checks.ok());
  REQUIRE_FALSE(R.checks.exhausted());  // the sweeps reached a clean pass
  REQUIRE(R.algebra.carrier.size() == 2);
  REQUIRE_FALSE(R.underlying_preserved.has_value());  // too big to observe
  REQUIRE(find_algebra_iso(T, R.algebra, Q).has_value());
  REQUIRE(tensor_generated_by_universal(T, R));

  SetObj dom = FinSetBase::product({c2, c2});
  std::size_t multi = 0;
  for (const auto& f : FinSetBase::hom_set(dom, c2)) {
    bool joint = is_multi_algebra_map(T, {Q, Q}, Q, f);
    TensorFactorization F = factor_through_tensor(T, R, Q, f);
    REQUIRE(F.ok == joint);
    multi += joint;
  }
  REQUIRE(multi == 2);
}

TEST_CASE("the algebra multicategory is closed by the hom algebras") {
  SetMonad T = rmodule_monad(zmod_ring(2));
  TAlgebra Z = free_algebra(T, "z0", SetObj{});
  TAlgebra M = free_algebra(T, "f2", atoms({"e"}));
  Multicat em = em_multicat(T, {Z, M}, "em-f2");

  ClosedData cd = em_closed_data(T, {Z, M});
  REQUIRE(cd.hom.at({"f2", "f2"}) == "f2");
  REQUIRE(cd.hom.at({"z0", "f2"}) == "z0");
  REQUIRE(cd.hom.at({"f2", "z0"}) == "z0");
  REQUIRE(cd.hom.at({"z0", "z0"}) == "z0");
  REQUIRE(check_closed(em, cd).ok());

  // the universal nullary multimap picks out the generator
  TypedMultimap u{{}, "f2", Elem::tuple({Elem::tuple({Elem::atom("1")})})};
  REQUIRE(is_universal(em, u) == Verdict::pass);
  ClosedStructure cs = derive_closed_structure(em, cd, u);
  REQUIRE(cs.axioms.ok());
  REQUIRE(cs.e == "f2");

  // the tensor's mediating multimap is universal, in every context
  TensorResult R = tensor_algebras(T, {M, M}, "f2xf2", 4096);
  auto iso = find_algebra_iso(T, R.algebra, M);
  REQUIRE(iso.has_value());
  std::vector<Elem> v;
  for (const auto& w : R.universal.dom) v.push_back((*iso)(R.universal(w)));
  TypedMultimap ubin{{"f2", "f2"}, "f2", Elem::tuple(std::move(v))};
  REQUIRE(is_universal(em, ubin) == Verdict::pass);
  REQUIRE(is_strongly_universal(em, ubin) == Verdict::pass);

  // sanity: a non-universal multimap is rejected
  SetObj dom = FinSetBase::product({M.carrier, M.carrier});
  Elem zero = Elem::tuple({Elem::atom("0")});
  TypedMultimap zz{{"f2", "f2"}, "f2",
                   Elem::tuple(std::vector<Elem>(dom.size(), zero))};
  REQUIRE(is_universal(em, zz) == Verdict::fail);
}
