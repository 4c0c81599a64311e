#include "compatlab/paths/ensemble.hpp"

namespace compatlab::paths {

void require_same_provenance(const PathEnsemble& a, const PathEnsemble& b) {
  if (a.grid() != b.grid()) throw ProvenanceError("ensembles live on different time grids");
  if (a.paths() != b.paths()) throw ProvenanceError("ensembles have different path counts");
  if (a.provenance().seed != b.provenance().seed) throw ProvenanceError("ensembles come from different seeds");
  if (a.provenance().spec_hash != b.provenance().spec_hash)
    throw ProvenanceError("ensembles come from different model specs");
}

PathEnsemble coarsen(const PathEnsemble& fine, std::size_t steps) {
  const std::size_t n = fine.grid().steps();
  if (steps == 0 || n % steps != 0) throw PreconditionError("coarse step count must divide the fine one");
  const std::size_t stride = n / steps;
  PathEnsemble out(TimeGrid(fine.grid().horizon(), steps), fine.paths(), fine.dims(), fine.provenance());
  for (std::size_t p = 0; p < fine.paths(); ++p)
    for (std::size_t k = 0; k <= steps; ++k)
      for (std::size_t j = 0; j < fine.dims(); ++j) out(p, k, j) = fine(p, k * stride, j);
  return out;
}

}  // namespace compatlab::paths
