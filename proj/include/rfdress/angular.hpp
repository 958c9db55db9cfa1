#pragma once

namespace rfdress {

// Wigner 3-j symbol; j and m may be half-integer.
double wigner_3j(double j1, double j2, double j3, double m1, double m2, double m3);

// <j1 m1 j2 m2 | J M>
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// <l m | C^k_q | l' m'> with C^k_q = sqrt(4 pi / (2k+1)) Y_{k q}
double gaunt_c(int l, int m, int k, int q, int lp, int mp);

// <S' mS' | [S1 x S2]^2_q | S mS> for two spin-1/2 atoms coupled to total
// spin S: rank-2 tensor built from the individual spin operators.
double pair_spin_tensor(int s_bra, int ms_bra, int q, int s_ket, int ms_ket);

}  // namespace rfdress
