#include <catch2/catch_amalgamated.hpp>

#include "freeprod/base_fincat.hpp"
#include "freeprod/vgraph.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

SetVGraph arrow_graph() { return make_set_graph({"0", "1"}, {{"e", "0", "1"}}); }

// two objects, every hom a single edge; forces all linear parts
SetVGraph complete2() {
  return make_set_graph({"x", "y"},
                        {{"k", "x", "x"}, {"k", "x", "y"}, {"k", "y", "x"}, {"k", "y", "y"}});
}

SetVGraph loop_graph() { return make_set_graph({"a"}, {{"l", "a", "a"}}); }
SetVGraph dot_graph() { return make_set_graph({"b"}, {}); }
SetVGraph two_loops_graph() { return make_set_graph({"c"}, {{"p", "c", "c"}, {"q", "c", "c"}}); }

oracle::OGraph to_oracle(const SetVGraph& g) {
  oracle::OGraph o;
  o.objects = g.objects;
  for (auto& [k, v] : g.hom)
    if (!v.empty()) o.hom[k] = v.size();
  return o;
}

// the unique morphism into a singleton hom set
SetMor forced(const SetObj& dom, const SetObj& cod) {
  REQUIRE(cod.size() == 1);
  return make_mor(dom, cod, [&](const Elem&) { return cod[0]; });
}

// multimap into a graph all of whose homs are singletons: the object
// multifunction determines everything
VMultimap<FinSetBase> full_multimap(const std::vector<SetVGraph>& As, const SetVGraph& T,
                                    const std::function<std::string(const std::vector<std::string>&)>& om) {
  VMultimap<FinSetBase> F;
  F.sources = As;
  F.target = T;
  std::vector<std::size_t> radix;
  for (auto& A : As) radix.push_back(A.objects.size());
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    F.obj[t] = om(t);
    return true;
  });
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    for (std::size_t var = 0; var < As.size(); ++var)
      for (auto& b : As[var].objects) {
        std::vector<std::string> t2 = t, key = t;
        t2[var] = b;
        key[var] = "";
        F.parts[{var, key, t[var], b}] =
            forced(As[var].at(t[var], b), T.at(F.obj.at(t), F.obj.at(t2)));
      }
    return true;
  });
  return F;
}

template <typename B>
bool mm_eq(const VMultimap<B>& f, const VMultimap<B>& g) {
  return f.obj == g.obj && f.parts == g.parts;
}

}  // namespace

TEST_CASE("set-valued graphs resolve missing homs to the empty set") {
  auto A = arrow_graph();
  A.validate();
  REQUIRE(A.at("0", "1").size() == 1);
  REQUIRE(A.at("1", "0").empty());
  REQUIRE(A.at("0", "0").empty());
}

TEST_CASE("graph morphism enumeration matches both counting routes") {
  auto A = arrow_graph(), K = complete2();
  auto ms = enumerate_vmors(A, K);
  REQUIRE(ms.size() == 4);
  for (auto& m : ms) REQUIRE(vmor_valid(A, K, m));
  REQUIRE(count_set_vmors(A, K) == 4);
  REQUIRE(oracle::count_graph_morphisms(to_oracle(A), to_oracle(K)) == 4);

  // identity and composition stay valid
  auto id = identity_vmor(A);
  REQUIRE(vmor_valid(A, A, id));
  REQUIRE(compose_vmor(ms[0], id) == ms[0]);
}

TEST_CASE("hom graph of the arrow into a two-loop object") {
  auto A = arrow_graph();
  auto B = two_loops_graph();
  auto H = graph_hom(A, B);
  // one object map, loop choice only on the edge: 2 points
  REQUIRE(H.points.size() == 2);
  // hom(f,g) = B(fa,ga) x B(fb,gb): 2*2 = 4 whatever f,g
  for (auto& a : H.graph.objects)
    for (auto& b : H.graph.objects) REQUIRE(H.graph.at(a, b).size() == 4);
}

TEST_CASE("free product of two arrows has no double-move homs") {
  auto A = arrow_graph();
  auto fp = free_product_graphs<FinSetBase>({A, A});
  REQUIRE(fp.graph.objects.size() == 4);
  REQUIRE(fp.graph.at("(0,0)", "(1,1)").empty());   // both coordinates move
  REQUIRE(fp.graph.at("(0,0)", "(1,0)").size() == 1);
  REQUIRE(fp.graph.at("(0,0)", "(0,1)").size() == 1);
  REQUIRE(fp.graph.at("(0,0)", "(0,0)").empty());   // no loops in the factors
  REQUIRE(multimap_valid(fp.unit));
}

TEST_CASE("tensor-hom-multimap counts agree on the two-arrow example") {
  auto A = arrow_graph(), K = complete2();
  auto fp = free_product_graphs<FinSetBase>({A, A});
  auto H = graph_hom(A, K);

  unsigned long long via_tensor = count_set_vmors(fp.graph, K);
  unsigned long long via_hom = count_set_vmors(A, H.graph);
  unsigned long long direct = oracle::count_multimaps({to_oracle(A), to_oracle(A)}, to_oracle(K));
  REQUIRE(via_tensor == 16);
  REQUIRE(via_hom == 16);
  REQUIRE(direct == 16);

  // enumeration agrees with the counting formula
  REQUIRE(enumerate_vmors(fp.graph, K).size() == 16);
  REQUIRE(enumerate_vmors(A, H.graph).size() == 16);
}

TEST_CASE("tensor-hom-multimap counts agree with loops in play") {
  auto A = make_set_graph({"a0", "a1"}, {{"l", "a0", "a0"}, {"e", "a0", "a1"}});
  auto B = loop_graph();
  auto C = make_set_graph({"c0", "c1"},
                          {{"p", "c0", "c0"}, {"q", "c0", "c0"}, {"r", "c0", "c1"}, {"s", "c1", "c1"}});
  auto fp = free_product_graphs<FinSetBase>({A, B});
  auto H = graph_hom(B, C);

  unsigned long long via_tensor = count_set_vmors(fp.graph, C);
  unsigned long long via_hom = count_set_vmors(A, H.graph);
  unsigned long long direct = oracle::count_multimaps({to_oracle(A), to_oracle(B)}, to_oracle(C));
  REQUIRE(via_tensor == direct);
  REQUIRE(via_hom == direct);
  REQUIRE(enumerate_vmors(fp.graph, C).size() == via_tensor);

  // the frozen one-object instance: (loop, dot) -> two_loops has 2 multimaps
  auto fp2 = free_product_graphs<FinSetBase>({loop_graph(), dot_graph()});
  REQUIRE(count_set_vmors(fp2.graph, two_loops_graph()) == 2);
  REQUIRE(count_set_vmors(loop_graph(), graph_hom(dot_graph(), two_loops_graph()).graph) == 2);
  REQUIRE(oracle::count_multimaps({to_oracle(loop_graph()), to_oracle(dot_graph())},
                                  to_oracle(two_loops_graph())) == 2);
}

TEST_CASE("every multimap factors uniquely through the free product") {
  auto A = arrow_graph(), K = complete2();
  auto fp = free_product_graphs<FinSetBase>({A, A});
  auto F = full_multimap({A, A}, K,
                         [](const std::vector<std::string>& t) { return t[0] == "0" ? "x" : "y"; });
  REQUIRE(multimap_valid(F));

  auto G = factor_through_free_product(fp, F);
  REQUIRE(vmor_valid(fp.graph, K, G));
  auto recomposed = compose_multimap(multimap_of_vmor(fp.graph, K, G), {fp.unit});
  REQUIRE(mm_eq(recomposed, F));

  // uniqueness: exactly one of all graph morphisms out of the product works
  std::size_t hits = 0;
  for (auto& g : enumerate_vmors(fp.graph, K)) {
    auto h = compose_multimap(multimap_of_vmor(fp.graph, K, g), {fp.unit});
    if (mm_eq(h, F)) {
      ++hits;
      REQUIRE(g == G);
    }
  }
  REQUIRE(hits == 1);
}

TEST_CASE("currying against the hom graph inverts right evaluation") {
  auto A = arrow_graph(), K = complete2();
  auto H = graph_hom(A, K);
  auto rev = right_evaluation(A, K, H);
  REQUIRE(multimap_valid(rev));

  auto check_roundtrip = [&](const VMultimap<FinSetBase>& F) {
    auto G = closedness_factor(F, H);
    REQUIRE(multimap_valid(G));
    auto idA = multimap_of_vmor(A, A, identity_vmor(A));
    auto back = compose_multimap(rev, {G, idA});
    REQUIRE(mm_eq(back, F));
  };
  check_roundtrip(full_multimap(
      {A, A}, K, [](const std::vector<std::string>& t) { return t[0] == "0" ? "x" : "y"; }));
  check_roundtrip(full_multimap(
      {A, A}, K, [](const std::vector<std::string>& t) { return t[1] == "0" ? "y" : "x"; }));
  check_roundtrip(full_multimap({A, A}, K, [](const std::vector<std::string>&) { return "x"; }));
}

TEST_CASE("a multimap is the same data as a compatible cocone") {
  auto A = arrow_graph(), K = complete2();
  auto F = full_multimap({A, A}, K,
                         [](const std::vector<std::string>& t) { return t[1] == "0" ? "x" : "y"; });
  auto legs = cocone_of_multimap(F);
  REQUIRE(legs.size() == 2);
  for (std::size_t live = 0; live < 2; ++live) {
    auto P = one_slot_product<FinSetBase>({A, A}, live);
    REQUIRE(vmor_valid(P, K, legs[live]));
  }
  auto F2 = multimap_from_cocone<FinSetBase>({A, A}, K, legs);
  REQUIRE(mm_eq(F2, F));

  // legs that disagree on objects are rejected
  auto bad = legs;
  for (auto& [o, img] : bad[1].obj) img = "x";
  REQUIRE_THROWS_AS(multimap_from_cocone<FinSetBase>({A, A}, K, bad), precondition_error);
}

TEST_CASE("nullary free product is the point with no endo-edges") {
  auto fp = free_product_graphs<FinSetBase>({});
  REQUIRE(fp.graph.objects == std::vector<std::string>{"()"});
  REQUIRE(fp.graph.at("()", "()").empty());
  REQUIRE(multimap_valid(fp.unit));
  REQUIRE(fp.unit.obj.at({}) == "()");
}

TEST_CASE("the one-point edgeless graph is a free-product unit") {
  auto X = make_set_graph({"u", "v"}, {{"e", "u", "v"}, {"l", "u", "u"}});
  auto unit = dot_graph();
  auto left = free_product_graphs<FinSetBase>({X, unit});
  auto right = free_product_graphs<FinSetBase>({unit, X});
  REQUIRE(set_graphs_isomorphic(left.graph, X));
  REQUIRE(set_graphs_isomorphic(right.graph, X));

  // and the hom out of it recovers the target
  auto B = make_set_graph({"s", "t"}, {{"m", "s", "t"}, {"n", "s", "s"}});
  REQUIRE(set_graphs_isomorphic(graph_hom(unit, B).graph, B));
}

TEST_CASE("free products are symmetric under the coordinate swap") {
  auto A = make_set_graph({"a0", "a1"}, {{"l", "a0", "a0"}, {"e", "a0", "a1"}});
  auto B = arrow_graph();
  auto AB = free_product_graphs<FinSetBase>({A, B});
  auto BA = free_product_graphs<FinSetBase>({B, A});
  REQUIRE(set_graphs_isomorphic(AB.graph, BA.graph));
}

TEST_CASE("case-split homs equal the distributed coproduct-of-products form") {
  auto A = make_set_graph({"a0", "a1"}, {{"l", "a0", "a0"}, {"e", "a0", "a1"}});
  auto B = arrow_graph();
  auto C = two_loops_graph();
  std::vector<SetVGraph> As = {A, B, C};
  auto fp = free_product_graphs<FinSetBase>(As);
  for (auto& [ta, na] : fp.name)
    for (auto& [tb, nb] : fp.name) {
      auto split = fp.graph.at(na, nb);
      auto dist = free_product_hom_distributed<FinSetBase>(As, ta, tb);
      REQUIRE(split.size() == dist.size());
      // the order-preserving pairing is the explicit bijection
      std::map<Elem, Elem> pairing;
      for (std::size_t i = 0; i < split.size(); ++i) pairing[split[i]] = dist[i];
      REQUIRE(pairing.size() == split.size());
    }
}

TEST_CASE("currying right evaluation itself yields the identity") {
  auto A = arrow_graph(), K = complete2();
  auto H = graph_hom(A, K);
  auto rev = right_evaluation(A, K, H);
  auto G = closedness_factor(rev, H);
  auto id = multimap_of_vmor(H.graph, H.graph, identity_vmor(H.graph));
  REQUIRE(mm_eq(G, id));
}

TEST_CASE("nullary currying names the point of the hom graph") {
  auto A = arrow_graph(), K = complete2();
  auto H = graph_hom(A, K);
  for (auto& pt : H.points) {
    auto F = multimap_of_vmor(A, K, pt);
    // treat the single slot as the abstraction slot: zero slots remain
    auto G = closedness_factor(F, H);
    REQUIRE(G.arity() == 0);
    REQUIRE(G.obj.at({}) == H.name_of(pt));
  }
}

TEST_CASE("category-valued graphs run the same constructions one level up") {
  CatVGraph A;
  A.objects = {"x", "y"};
  A.hom[{"x", "y"}] = walking_arrow();

  CatVGraph B;
  B.objects = {"p"};
  B.hom[{"p", "p"}] = terminal_category();

  // [A,B]: object maps are forced; each hom choice picks a functor per pair
  auto H = graph_hom(A, B);
  REQUIRE(H.points.size() == 1);
  REQUIRE(H.graph.at("f0", "f0").objects.size() == 1);

  auto fp = free_product_graphs<FinCatBase>({A, B});
  REQUIRE(fp.graph.objects.size() == 2);
  // one moving coordinate: the walking arrow comes through untouched
  REQUIRE(fp.graph.at("(x,p)", "(y,p)").morphisms.size() == 3);
  // diagonal: coproduct of an empty endo-hom and the terminal category
  REQUIRE(fp.graph.at("(x,p)", "(x,p)").objects.size() == 1);
  REQUIRE(multimap_valid(fp.unit));

  // functor enumeration: terminal -> walking arrow picks an object
  REQUIRE(FinCatBase::hom_set(terminal_category(), walking_arrow()).size() == 2);
  // walking arrow -> walking arrow: monotone maps on two objects
  REQUIRE(FinCatBase::hom_set(walking_arrow(), walking_arrow()).size() == 3);
  for (auto& F : FinCatBase::hom_set(walking_arrow(), walking_arrow()))
    REQUIRE(functor_table_valid(F));
}

TEST_CASE("incompatible cocone legs are reported by pair") {
  auto A = arrow_graph(), K = complete2();
  auto F = full_multimap({A, A}, K,
                         [](const std::vector<std::string>& t) { return t[0] == "0" ? "x" : "y"; });
  auto legs = cocone_of_multimap(F);
  for (auto& [o, img] : legs[1].obj) img = "x";
  try {
    multimap_from_cocone<FinSetBase>({A, A}, K, legs);
    FAIL("expected a compatibility error");
  } catch (const precondition_error& e) {
    REQUIRE(std::string(e.what()).find("(1,2)") != std::string::npos);
  }
}

TEST_CASE("object-count guards trip on oversized products") {
  std::vector<std::string> names;
  for (int i = 0; i < 101; ++i) names.push_back("v" + std::to_string(i));
  auto big = make_set_graph(names, {});
  REQUIRE_THROWS_AS(free_product_graphs<FinSetBase>({big, big}), size_guard_error);
}
