#pragma once

// Four-sign counterexample: a single copy is partially compatible for
// H = {Y4}, but two independent copies sharing Y are not jointly so.
//
// zeta_1..zeta_4 are independent fair signs, Y = (z1 z2, z2 z3, z3 z4, z4 z1),
// F^Y = sigma(Y1), X = Y2 if xi < 1/2 else Y3, F^X = sigma(X).

#include "compatlab/exact/compat.hpp"

namespace compatlab::exact {

template <class Num>
struct ZetaScenario {
  SpacePtr<Num> space;
  Rv<Num> y;
  Rv<Num> x1;
  Rv<Num> x2;
  CompatStructure<Num> structure;  ///< one alpha: (sigma(X), sigma(Y1)), H = {Y4}
};

template <class Num>
struct ZetaReport {
  std::size_t atoms = 0;
  Num single_max_abs_joint{0};   ///< max |E[Y4 | F^Y v F^X1]|
  Num single_max_abs_y{0};       ///< max |E[Y4 | F^Y]|
  bool single_partial_pass = false;
  CheckReport<Num> joint;
  bool joint_fails = false;
  Num closed_form_max_deviation{0};
  bool closed_form_equal = false;
  Rv<Num> joint_conditional;     ///< E[Y4 | F^Y v F^X1 v F^X2] atom by atom
};

template <class Num>
ZetaScenario<Num> build_zeta_scenario() {
  std::vector<std::string> atoms;
  std::vector<Num> weights;
  std::vector<Value<Num>> y, x1, x2;
  const Num w = Num{1} / Num{64};
  auto sign = [](unsigned bit) { return bit ? Num{-1} : Num{1}; };
  for (unsigned code = 0; code < 16; ++code) {
    Num z1 = sign(code & 1u), z2 = sign(code & 2u), z3 = sign(code & 4u), z4 = sign(code & 8u);
    Value<Num> yv{z1 * z2, z2 * z3, z3 * z4, z4 * z1};
    for (unsigned xi1 = 0; xi1 < 2; ++xi1)
      for (unsigned xi2 = 0; xi2 < 2; ++xi2) {
        atoms.push_back("z" + std::to_string(code) + (xi1 ? "H" : "L") + (xi2 ? "H" : "L"));
        weights.push_back(w);
        y.push_back(yv);
        // xi < 1/2 selects Y2, xi >= 1/2 selects Y3.
        x1.push_back(Value<Num>{xi1 ? yv[2] : yv[1]});
        x2.push_back(Value<Num>{xi2 ? yv[2] : yv[1]});
      }
  }
  auto space = make_space<Num>(std::move(atoms), std::move(weights));
  CompatStructure<Num> c;
  c.add({"alpha", identity_map<Num>(), project_map<Num>({0})});
  c.partial({component_test<Num>(3, "h0=Y4")});
  return {space, Rv<Num>(space, std::move(y)), Rv<Num>(space, std::move(x1)), Rv<Num>(space, std::move(x2)),
          std::move(c)};
}

/// 1{X1 != X2} Y1 X1 X2 + (1/3) 1{X1 = X2} Y1, atom by atom.
template <class Num>
Rv<Num> zeta_closed_form(const ZetaScenario<Num>& s) {
  std::vector<Num> out(s.space->size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    const Num& y1 = s.y[a][0];
    const Num& a1 = s.x1.scalar_at(a);
    const Num& a2 = s.x2.scalar_at(a);
    out[a] = a1 != a2 ? Num(y1 * a1 * a2) : Num(y1 / Num{3});
  }
  return Rv<Num>::scalar(s.space, out);
}

template <class Num>
ZetaReport<Num> zeta_counterexample() {
  auto s = build_zeta_scenario<Num>();
  ZetaReport<Num> r{s.space->size(), Num{0}, Num{0}, false, {}, false, Num{0}, false, Rv<Num>::scalar(s.space, std::vector<Num>(s.space->size()))};

  auto h0 = map_scalar(s.y, s.structure.h_set()->front().eval);
  auto fy = s.structure.y_partition(0, s.y);
  auto single = cond_exp(h0, join(fy, s.structure.x_partition(0, s.x1)));
  auto base = cond_exp(h0, fy);
  for (std::size_t a = 0; a < s.space->size(); ++a) {
    auto v1 = NumTraits<Num>::abs(single.scalar_at(a));
    auto v2 = NumTraits<Num>::abs(base.scalar_at(a));
    if (v1 > r.single_max_abs_joint) r.single_max_abs_joint = v1;
    if (v2 > r.single_max_abs_y) r.single_max_abs_y = v2;
  }
  r.single_partial_pass = NumTraits<Num>::negligible(r.single_max_abs_joint) &&
                          NumTraits<Num>::negligible(r.single_max_abs_y) &&
                          check_compatibility(s.x1, s.y, s.structure).pass;

  r.joint = check_joint_compatibility(s.x1, s.x2, s.y, s.structure);
  r.joint_fails = !r.joint.pass;

  auto joint_part = join(fy, join(s.structure.x_partition(0, s.x1), s.structure.x_partition(0, s.x2)));
  r.joint_conditional = cond_exp(h0, joint_part);
  r.closed_form_max_deviation = max_abs_difference(r.joint_conditional, zeta_closed_form(s));
  r.closed_form_equal = NumTraits<Num>::negligible(r.closed_form_max_deviation);
  return r;
}

}  // namespace compatlab::exact
