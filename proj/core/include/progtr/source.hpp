#pragma once

#include "progtr/rng.hpp"
#include "progtr/tensor.hpp"
#include "progtr/transceiver.hpp"

namespace progtr {

enum class SourceKind { bernoulli_bits, gaussian };

inline SourceKind source_for(InputKind k) {
    return k == InputKind::bits ? SourceKind::bernoulli_bits : SourceKind::gaussian;
}

/// i.i.d. payload rows: fair coins in {0,1} or standard normals.
ad::Tensor sample_batch(SourceKind kind, int b, int batch, RngStream& rng);

} // namespace progtr
