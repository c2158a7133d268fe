#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "fca/core/types.hpp"

namespace fca::twop {

// Internal basis e1..e6 (0-based here) as ordered mode pairs (particle 1, particle 2), modes 1-based.
inline constexpr std::array<std::array<int, 2>, 6> kInternalPairs = {{{1, 4}, {3, 2}, {3, 4}, {4, 1}, {2, 3}, {4, 3}}};

// Relative coordinate y on a periodic ring of 2L sites, y in [-L, L-1]; state index = i * 2L + (y + L).
struct Params {
  double p = 0.0;
  Complex lambda = 0.0;
  int L = 8;

  static Params from_polar(double p, double lambda_abs, double lambda_phase, int L);
  void validate() const;  // throws std::invalid_argument unless L >= 8 and even
  double coupling() const { return std::sqrt(2.0) * std::abs(lambda); }  // sqrt2 |lambda|
  int ring() const { return 2 * L; }
  int dim() const { return 12 * L; }
};

int wrap(int y, int L);  // representative of y in [-L, L-1]
Eigen::Index state_index(int internal, int y, int L);

ComplexMatrix build_free_block(const Params& params);
// exp(-i O') on (e1, e2, e3); the full 6x6 block is this twice.
ComplexMatrix interaction_3x3(Complex lambda);
ComplexMatrix build_interaction_block(Complex lambda);
ComplexMatrix build_interaction(const Params& params);  // J on the whole lattice
ComplexMatrix build_antisymmetrizer(const Params& params);

enum class Sector { A, B, C, D };
const char* sector_name(Sector s);

// Orthonormal basis of range(P_-): (e_i |y> - e_{i+3} |-y>) / sqrt2 for i in 0..2 and all y on the ring.
struct AntisymmetricVector {
  int internal;  // 0, 1, 2
  int y;
  Sector sector;
};
std::vector<AntisymmetricVector> antisymmetric_basis(int L);
ComplexVector basis_vector(const AntisymmetricVector& b, int L);

class BlockedEvolution {
 public:
  explicit BlockedEvolution(const Params& params);

  const Params& params() const { return params_; }
  int dim() const { return params_.dim(); }

  ComplexVector apply(const ComplexVector& v) const;
  ComplexMatrix dense_matrix() const;
  // B^dagger A B in the antisymmetric basis (6L x 6L).
  ComplexMatrix restricted_matrix() const;

 private:
  Params params_;
  Complex phase_plus_;
  Complex phase_minus_;
  ComplexMatrix j3_;
};

BlockedEvolution build_evolution(const Params& params);

using SparseComplex = Eigen::SparseMatrix<Complex>;

struct SubspaceProjectors {
  SparseComplex a, b, c, d;
};
SubspaceProjectors subspace_projectors(const Params& params);

// ||A - e^{2ip} P_a - e^{-2ip} P_b - P_c A P_c - P_d A P_d||_max
double decomposition_defect(const Params& params);

enum class Family { PhiF, PhiS, PhiB0, PhiBMinus, PhiBPlus };
std::string family_name(Family f);

struct Coefficients {
  Complex c_k = 0.0, d_k = 0.0, d_prime_k = 0.0;
  double norm = 0.0;  // N_k
  double gamma = 0.0, eps = 0.0;
  Complex sigma = 0.0;
};

struct AnalyticEigenstate {
  Family family;
  std::optional<double> k;
  Complex eigenvalue;
  ComplexVector vector;  // full 12L coordinates, unit norm
  Coefficients coefficients;
};

// gamma = cos(sqrt2|lambda|), eps = cos(2p)(gamma + 1), sigma = -i conj(lambda) sin(a) / a.
Coefficients base_coefficients(const Params& params);

std::vector<double> free_momenta(int L);  // 2 pi j / L folded into [-pi, pi)
AnalyticEigenstate analytic_free_state(const Params& params, double k);

// Unnormalized chain data; throws if sqrt2|lambda| is a multiple of 2 pi.
Coefficients scattering_coefficients(const Params& params, double k);
AnalyticEigenstate analytic_scattering_state(const Params& params, double k);

// Relative momenta of the scattering states that are exact eigenvectors on the ring:
// roots of Im(e^{ikL/2} c_k) on [-pi, pi), with the c_k = 0 roots removed.
std::vector<double> scattering_momenta(const Params& params);

struct Criticality {
  std::optional<int> two_p_multiple;        // n' with 2p = n' pi
  std::optional<int> coupling_odd_multiple;  // n with sqrt2|lambda| = (2n+1) pi
  bool coupling_even_multiple = false;      // sqrt2|lambda| = 2n pi
};
Criticality criticality(const Params& params, double tol = 1e-9);

std::vector<AnalyticEigenstate> bound_states(const Params& params);
// The y = 0 state of a bound family at any parameters; an eigenvector only at criticality.
// The eigenvalue field holds the critical eigenvalue.
AnalyticEigenstate bound_state_vector(const Params& params, Family family);

struct CharacteristicRoots {
  Complex r_plus, r_minus;
  double gamma, eps;
};
CharacteristicRoots characteristic_roots(const Params& params);
CharacteristicRoots characteristic_roots(double gamma, double eps);

// Coordinates in the H_d basis: w_x = (e3|2x> - e6|-2x>)/sqrt2 for x in [-L/2+1, L/2], then
// u1 = (e1 - e4)|0>/sqrt2, u2 = (e2 - e5)|0>/sqrt2.
ComplexVector hd_coordinates(const ComplexVector& v, int L);
int hd_chain_site(int index, int L);  // x for chain index 0..L-1

// Full two-particle evolution on an n-site ring of pairs, index ((x1 n + x2) 4 + i) 4 + j with
// modes 0..3. Used to check the Q-blocking.
struct PairSpace {
  ComplexMatrix free;            // F (x) F
  ComplexMatrix interaction;     // J
  ComplexMatrix antisymmetrizer; // P_-
  ComplexMatrix q;               // Q' (x) I (x) I
  ComplexMatrix evolution() const { return antisymmetrizer * interaction * free * antisymmetrizer; }
};
PairSpace pair_space(int n, Complex lambda);

}  // namespace fca::twop
