#include "kflow/entropy.hpp"

#include <cmath>

#include "kflow/ops.hpp"

namespace kflow {

namespace {

double dot_at(const VectorField& a, const VectorField& b, std::size_t c) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a.at(i, c) * b.at(i, c);
  return s;
}

double contract_at(const TensorField& a, const TensorField& b, std::size_t c) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a.comp(i, j)[c] * b.comp(i, j)[c];
  return s;
}

TensorField sym_of(const TensorField& j) {
  TensorField out(j.grid());
  for (int i = 0; i < j.dim(); ++i)
    for (int k = 0; k < j.dim(); ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] + b[c]);
    }
  return out;
}

TensorField antisym_of(const TensorField& j) {
  TensorField out(j.grid());
  for (int i = 0; i < j.dim(); ++i)
    for (int k = 0; k < j.dim(); ++k) {
      auto& o = out.comp(i, k);
      const auto& a = j.comp(i, k);
      const auto& b = j.comp(k, i);
      for (std::size_t c = 0; c < o.size(); ++c) o[c] = 0.5 * (a[c] - b[c]);
    }
  return out;
}

ScalarField log_field(const ScalarField& rho) {
  ScalarField l(rho.grid());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = std::log(rho[i]);
  return l;
}

VectorField diff(const VectorField& a, const VectorField& b) {
  VectorField d = a;
  d -= b;
  return d;
}

}  // namespace

EntropyReport kappa_entropy(const AugState& s, const Params& p, double time) {
  check_valid(s);
  const Grid& g = s.rho.grid();
  const double vol = g.cell_volume();
  const double sk = p.sqrt_kappa();
  const double s1mk = p.sqrt_1mkappa();

  const TensorField jv = jacobian(s.v);
  const TensorField av = antisym_of(jv);
  const TensorField dv = sym_of(jv);
  const TensorField jw = jacobian(s.w);
  const VectorField grho = grad(s.rho);

  EntropyReport rep;
  rep.time = time;
  double kv = 0.0, kw = 0.0, pot = 0.0, da = 0.0, dd = 0.0, dp = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double rho = s.rho[c];
    kv += 0.5 * rho * dot_at(s.v, s.v, c);
    kw += 0.5 * rho * dot_at(s.w, s.w, c);
    pot += p.law.potential(rho);
    // |A(v)|^2 and |D(sqrt(1-k) v) - grad(sqrt(k) w)|^2, Frobenius.
    double a2 = 0.0, d2 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        const double aij = av.comp(i, j)[c];
        a2 += aij * aij;
        const double m = s1mk * dv.comp(i, j)[c] - sk * jw.comp(i, j)[c];
        d2 += m * m;
      }
    da += rho * a2;
    dd += rho * d2;
    dp += p.law.dp(rho) / rho * dot_at(grho, grho, c);
  }
  rep.kinetic_v = kv * vol;
  rep.kinetic_w = kw * vol;
  rep.potential = pot * vol;
  rep.dissipation_A = 2.0 * p.kappa * p.mu * da * vol;
  rep.dissipation_D = 2.0 * p.mu * dd * vol;
  rep.dissipation_p = 2.0 * p.kappa * p.mu * dp * vol;
  rep.total = rep.kinetic_v + rep.kinetic_w + rep.potential;
  return rep;
}

double relative_entropy(const AugState& s, const AugState& ref,
                        const Params& p) {
  check_valid(s);
  check_valid(ref);
  const Grid& g = s.rho.grid();
  detail::require_same_grid(g, ref.rho.grid());
  double acc = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    double kin = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      const double dv = s.v.at(i, c) - ref.v.at(i, c);
      const double dw = s.w.at(i, c) - ref.w.at(i, c);
      kin += dv * dv + dw * dw;
    }
    acc += 0.5 * s.rho[c] * kin + p.law.rel_potential(s.rho[c], ref.rho[c]);
  }
  return acc * g.cell_volume();
}

RelEntropyReport relative_inequality_audit(const AugState& s,
                                           const AugState& ref,
                                           const RefDerivs& dref,
                                           const Params& p, double time) {
  check_valid(s);
  check_valid(ref);
  const Grid& g = s.rho.grid();
  detail::require_same_grid(g, ref.rho.grid());
  detail::require_same_grid(g, dref.drdt.grid());
  detail::require_same_grid(g, dref.dVdt.grid());
  detail::require_same_grid(g, dref.dWdt.grid());
  if (!dref.drdt.all_finite() || !dref.dVdt.all_finite() ||
      !dref.dWdt.all_finite())
    throw std::invalid_argument("reference time derivatives must be finite");

  const double vol = g.cell_volume();
  const double mu = p.mu;
  const double kap = p.kappa;
  const double sk = p.sqrt_kappa();
  const double s1mk = p.sqrt_1mkappa();
  const double sk_over = p.sqrt_k_over_1mk();

  // Weak and test effective transport velocities v - sqrt(k/(1-k)) w.
  VectorField ut = s.v;
  ut.axpy(-sk_over, s.w);
  VectorField Ut = ref.v;
  Ut.axpy(-sk_over, ref.w);
  const ScalarField divUt = div(Ut);

  const VectorField grho = grad(s.rho);
  const VectorField gr = grad(ref.rho);
  const VectorField glrho = grad(log_field(s.rho));
  const VectorField glr = grad(log_field(ref.rho));

  const TensorField jv = jacobian(s.v);
  const TensorField jV = jacobian(ref.v);
  const TensorField jw = jacobian(s.w);
  const TensorField jW = jacobian(ref.w);
  const TensorField av = antisym_of(jv);
  const TensorField aV = antisym_of(jV);
  const TensorField aw = antisym_of(jw);
  const TensorField aW = antisym_of(jW);
  const TensorField dV = sym_of(jV);

  // LHS line 2 takes D of the whole combination
  // sqrt(1-k)(v-V) - sqrt(k)(w-W); RHS line 6 modulates
  // D(sqrt(1-k) V) - grad(sqrt(k) W).
  VectorField gcomb = diff(s.v, ref.v);
  gcomb *= s1mk;
  gcomb.axpy(-sk, diff(s.w, ref.w));
  const TensorField dcomb = sym_of(jacobian(gcomb));

  RelEntropyReport rep;
  rep.time = time;
  rep.value = relative_entropy(s, ref, p);

  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r5 = 0.0, r6 = 0.0, r7 = 0.0,
         r8 = 0.0;

  for (std::size_t c = 0; c < g.size(); ++c) {
    const double rho = s.rho[c];
    const double r = ref.rho[c];
    const double dprho = p.law.dp(rho);
    const double dpr = p.law.dp(r);
    const double d2Fr = p.law.d2potential(r);  // F''(r) = p'(r)/r

    // --- left-hand side rates ---
    double a2 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        const double aij = av.comp(i, j)[c] - aV.comp(i, j)[c];
        a2 += aij * aij;
      }
    l1 += rho * a2;
    l2 += rho * contract_at(dcomb, dcomb, c);
    double cross = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      cross += (dprho * glrho.at(i, c) - dpr * glr.at(i, c)) *
               (glrho.at(i, c) - glr.at(i, c));
    l3 += rho * cross;

    // --- right-hand side lines ---
    // 1: transport of the modulation by the effective velocity.
    double t1 = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      double advW = 0.0, advV = 0.0;
      for (int j = 0; j < g.dim(); ++j) {
        advW += ut.at(j, c) * jW.comp(i, j)[c];
        advV += ut.at(j, c) * jV.comp(i, j)[c];
      }
      t1 += advW * (ref.w.at(i, c) - s.w.at(i, c)) +
            advV * (ref.v.at(i, c) - s.v.at(i, c));
    }
    r1 += rho * t1;

    // 2: time derivatives of the test velocities.
    double t2 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      t2 += dref.dWdt.at(i, c) * (ref.w.at(i, c) - s.w.at(i, c)) +
            dref.dVdt.at(i, c) * (ref.v.at(i, c) - s.v.at(i, c));
    r2 += rho * t2;

    // 3: dt F'(r) (r - rho) - grad F'(r) . [rho ut - r Ut].
    double t3 = d2Fr * dref.drdt[c] * (r - rho);
    for (int i = 0; i < g.dim(); ++i)
      t3 -= d2Fr * gr.at(i, c) * (rho * ut.at(i, c) - r * Ut.at(i, c));
    r3 += t3;

    // 4: (p(r) - p(rho)) div(V - sqrt(k/(1-k)) W).
    r4 += (p.law.pressure(r) - p.law.pressure(rho)) * divUt[c];

    // 5: -k p'(rho) grad rho . [2 mu grad r / r - W / sqrt((1-k) k)].
    double t5 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      t5 += grho.at(i, c) *
            (2.0 * mu * gr.at(i, c) / r - ref.w.at(i, c) / (s1mk * sk));
    r5 += -kap * dprho * t5;

    // 6: modulated D-dissipation product.
    double t6 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        const double lhsf = s1mk * dV.comp(i, j)[c] - sk * jW.comp(i, j)[c];
        const double rhsf =
            s1mk * 0.5 *
                ((jV.comp(i, j)[c] - jv.comp(i, j)[c]) +
                 (jV.comp(j, i)[c] - jv.comp(j, i)[c])) -
            sk * (jW.comp(i, j)[c] - jw.comp(i, j)[c]);
        t6 += lhsf * rhsf;
      }
    r6 += rho * t6;

    // 7: A(V):A(V-v) plus the modulated pressure-gradient product.
    double t7a = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j)
        t7a += aV.comp(i, j)[c] * (aV.comp(i, j)[c] - av.comp(i, j)[c]);
    double t7b = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      t7b += gr.at(i, c) * (gr.at(i, c) / r - grho.at(i, c) / rho);
    r7 += rho * t7a + (rho / r) * dpr * t7b;

    // 8: mixed antisymmetric bracket.
    double t8 = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        const double avV = av.comp(i, j)[c] - aV.comp(i, j)[c];
        const double awW = aw.comp(i, j)[c] - aW.comp(i, j)[c];
        t8 += aW.comp(i, j)[c] * avV - awW * aV.comp(i, j)[c];
      }
    r8 += rho * t8;
  }

  rep.lhs[0] = 2.0 * kap * mu * l1 * vol;
  rep.lhs[1] = 2.0 * mu * l2 * vol;
  rep.lhs[2] = 2.0 * kap * mu * l3 * vol;
  rep.rhs[0] = r1 * vol;
  rep.rhs[1] = r2 * vol;
  rep.rhs[2] = r3 * vol;
  rep.rhs[3] = r4 * vol;
  rep.rhs[4] = r5 * vol;
  rep.rhs[5] = 2.0 * mu * r6 * vol;
  rep.rhs[6] = 2.0 * kap * mu * r7 * vol;
  rep.rhs[7] = 2.0 * p.sqrt_k1mk() * mu * r8 * vol;
  return rep;
}

Identity5Terms identity5_terms(double rho, double r,
                               std::span<const double> grho,
                               std::span<const double> gr,
                               const PressureLaw& law) {
  if (!(rho > 0.0) || !(r > 0.0))
    throw std::domain_error("identity requires positive densities");
  if (grho.size() != gr.size() || grho.empty() || grho.size() > 2)
    throw std::invalid_argument("gradient values must share dimension 1 or 2");

  const double dprho = law.dp(rho);
  const double dpr = law.dp(r);
  const double d2pr = law.d2p(r);

  double lhs = 0.0, grad2 = 0.0, chain = 0.0, gr2 = 0.0;
  for (std::size_t i = 0; i < grho.size(); ++i) {
    lhs += (dprho * grho[i] - dpr * gr[i]) * (grho[i] - gr[i]);
    const double d = grho[i] - gr[i];
    grad2 += d * d;
    // grad[p(rho)-p(r)-p'(r)(rho-r)] with grad rho = rho*grho, grad r = r*gr:
    const double gradmod =
        rho * grho[i] * (dprho - dpr) - d2pr * r * (rho - r) * gr[i];
    chain += gradmod * gr[i];
    gr2 += gr[i] * gr[i];
  }
  Identity5Terms t{};
  t.lhs = rho * lhs;
  t.rhs_grad = rho * dprho * grad2;
  t.rhs_chain = chain;
  t.rhs_coeff = -(rho * (dprho - dpr) - d2pr * (rho - r) * r) * gr2;
  return t;
}

double identity5_residual(double rho, double r, std::span<const double> grho,
                          std::span<const double> gr, const PressureLaw& law) {
  return identity5_terms(rho, r, grho, gr, law).residual();
}

}  // namespace kflow
