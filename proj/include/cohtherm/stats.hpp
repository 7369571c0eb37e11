#pragma once

namespace cohtherm {

// Conditional error probabilities of a fixed single-copy measurement.
//
// Orientation: hypothesis 1 is the coherent state, hypothesis 2 the thermal
// state, so
//   p    = P(decide thermal  | coherent true)
//   q    = P(decide coherent | thermal true)
//   perr = (p + q) / 2
//   bias = (p - q) / (p + q),  i.e. p = (1 + bias) perr, q = (1 - bias) perr.
//
// Under this orientation an ideal Kennedy measurement has p = 0 and is
// maximally biased (bias = -1); the photon-starved generalized-Kennedy
// measurement has bias ~ -0.213.
struct SingleCopyStats {
    double p = 0.0;
    double q = 0.0;
    double perr = 0.0;
    double bias = 0.0;
};

inline SingleCopyStats make_single_copy_stats(double p, double q) {
    SingleCopyStats s;
    s.p = p;
    s.q = q;
    s.perr = 0.5 * (p + q);
    s.bias = (p + q) > 0.0 ? (p - q) / (p + q) : 0.0;
    return s;
}

}  // namespace cohtherm
