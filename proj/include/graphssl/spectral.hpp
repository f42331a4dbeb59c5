#pragma once

// Spectral diffusion learners: label propagation over the row-stochastic
// operator (seed rows re-pinned after every round) and the normalized
// Laplacian variant Y <- (1-a) A Y + a Y0, plus a direct dense solve of the
// latter's fixed point for use as a test oracle on small graphs.

#include <cstdint>

#include "graphssl/csr_graph.hpp"
#include "graphssl/dense_matrix.hpp"
#include "graphssl/labels.hpp"

namespace graphssl {

struct SpectralParams {
  int iterations = 0;   // T >= 0
  double alpha = 0.1;   // return probability, in (0,1); norm-laplacian only
};

// Seed rows one-hot in {+1,-1} (the labeled class carries +1, every other
// class -1); non-seed rows all-zero.
SoftLabelMatrix init_labels(const SeedAssignment& seeds, NodeId n,
                            std::int32_t num_classes);

// T rounds of Y <- D^-1 W Y with seed rows reset to their encoding after
// every round.  T is a hyperparameter; the iteration has no convergence
// guarantee and callers pick T by validation.
SoftLabelMatrix label_propagation(const CsrGraph& g,
                                  const SeedAssignment& seeds, int iterations,
                                  unsigned threads = 1);

// T rounds of Y <- (1-a) A Y + a Y0 with A = D^-1/2 W D^-1/2.  No seed
// re-pinning: the a*Y0 term keeps re-injecting the seed encoding, and the
// iterate converges geometrically to the map's fixed point.
SoftLabelMatrix norm_laplacian_lp(const CsrGraph& g,
                                  const SeedAssignment& seeds,
                                  const SpectralParams& params,
                                  unsigned threads = 1);

// Solves (I - (1-a) A) Y = a Y0 exactly by dense LU with partial pivoting.
// O(n^3); intended as an oracle for graphs up to a few hundred nodes.
SoftLabelMatrix solve_fixed_point(const CsrGraph& g,
                                  const SeedAssignment& seeds, double alpha);

}  // namespace graphssl
