#pragma once

#include <span>

#include "twistorlab/frames.hpp"
#include "twistorlab/jets.hpp"
#include "twistorlab/smallmat.hpp"

// Chart-level machinery of an almost Hermitian structure (h, J) given as
// jet-valued component matrices. Everything is dimension generic and keeps
// the column convention J(d_B) = sum_A J(A,B) d_A. Connection coefficient
// tensors use the layout (output, direction, argument); lowered curvature
// uses (b, c, d, e) = 2-form slots, input, output.
namespace twistorlab::hermitian {

Mat<double> values_of(const Mat<Jet>& m);
T3<double> values_of(const T3<Jet>& t);

// (DJ)(a; b, c) = covariant derivative of J in direction b, argument c.
// Output order is one less than min(order J, order Gamma + 1).
T3<Jet> covariant_j(const Mat<Jet>& J, const T3<Jet>& Gamma);

// Omega(a, b) = h(J d_a, d_b).
Mat<Jet> kaehler_form(const Mat<Jet>& h, const Mat<Jet>& J);

// Codifferential of a 2-form: (delta w)_c = -h^{ab} (nabla_a w)_{bc}.
Vec<Jet> codifferential(const Mat<Jet>& hinv, const T3<Jet>& Gamma,
                        const Mat<Jet>& w);

// (d alpha)(a, b) and (d w)(a, b, c) at the point, from jets of order >= 1.
Mat<double> exterior_d_values(std::span<const Jet> alpha);
T3<double> exterior_d_values(const Mat<Jet>& w);

// nabla-hat: the metric-and-J-preserving connection obtained from the
// Levi-Civita connection by the (1/2) (nabla J) J correction.
T3<Jet> hat_connection(const T3<Jet>& Gamma, const T3<Jet>& DJ,
                       const Mat<Jet>& J);

// Torsion-type tensor separating the canonical Hermitian connections.
// s_lower(b, c, a) = h(S(d_b, d_c), d_a); not symmetric in (b, c).
T3<Jet> s_lower(const Mat<Jet>& h, const Mat<Jet>& J, const T3<Jet>& DJ);
T3<Jet> s_raise(const Mat<Jet>& hinv, const T3<Jet>& sl);

// Canonical one-parameter family of Hermitian connections, assembled
// directly from its four-term defining contraction (not via hat + u S, so
// that split stays an independent cross-check). u = 1 preserves h and J and
// has torsion with vanishing (1,1)-part.
T3<Jet> canonical_connection(double u, const Mat<Jet>& h, const Mat<Jet>& hinv,
                             const Mat<Jet>& J, const T3<Jet>& Gamma,
                             const T3<Jet>& DJ);

T4<double> lower_curvature(const T4<double>& R, const Mat<double>& h);
T4<Jet> lower_curvature(const T4<Jet>& R, const Mat<Jet>& h);

// Curvature trace against (h, J): out(A, B) = h^{ab} J(c, b) R4(A, B, a, c).
// Equals 4 pi times the trace form of the connection behind R4.
Mat<double> trace_form(const T4<double>& R4, const Mat<double>& hinv,
                       const Mat<double>& J);
Mat<Jet> trace_form(const T4<Jet>& R4, const Mat<Jet>& hinv,
                    const Mat<Jet>& J);

// phi(A, B) = trace of Z -> h((nabla_A J)(JZ), (nabla_B J)(Z)).
Mat<double> phi_form(const Mat<double>& h, const Mat<double>& hinv,
                     const Mat<double>& J, const T3<double>& DJ);

// Star Ricci form of the Levi-Civita curvature:
// rho(A, B) = trace of Z -> R(JZ, d_A) J d_B paired against Z.
Mat<double> star_ricci(const T4<double>& R4, const Mat<double>& hinv,
                       const Mat<double>& J);

// out(A, B) = rho(A, c) J(c, B).
Mat<double> compose_j(const Mat<double>& rho, const Mat<double>& J);

// Nijenhuis tensor from the Levi-Civita derivative of J.
T3<Jet> nijenhuis(const Mat<Jet>& J, const T3<Jet>& DJ);

// Covariant derivative of a (1,2)-tensor at the point:
// out(g; a, b, c) = d_g F(a,b,c) + conn(a,g,e) F(e,b,c)
//                   - conn(e,g,b) F(a,e,c) - conn(e,g,c) F(a,b,e).
T4<double> covariant3_values(const T3<Jet>& F, const T3<double>& conn);

// max |J(e,a) J(f,b) R4(e,f,c,d) - R4(a,b,c,d)| / (1 + max |R4|).
double type11_defect(const T4<double>& R4, const Mat<double>& J);

// h-orthonormal frame adapted to J: rows 0..m-1 are E_k, rows m..2m-1 are
// J E_k. Gram-Schmidt over rotating coordinate starts; throws after the
// dimension count of failed starts.
Mat<double> j_adapted_frame(const Mat<double>& h, const Mat<double>& J,
                            int start = 0);

}  // namespace twistorlab::hermitian
