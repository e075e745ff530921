#include "progtr/source.hpp"

namespace progtr {

ad::Tensor sample_batch(SourceKind kind, int b, int batch, RngStream& rng) {
    ad::Tensor d({batch, b});
    if (kind == SourceKind::bernoulli_bits) {
        for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = rng.coin();
    } else {
        for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = rng.normal();
    }
    return d;
}

} // namespace progtr
