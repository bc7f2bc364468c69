// fock.cpp — parity-sector layout of the truncated Fock space
#include "uscav/master/fock.hpp"
#include "uscav/errors.hpp"

namespace uscav {

FockSpace::FockSpace(int cutoff_photon, int cutoff_exciton)
    : na_(cutoff_photon), nb_(cutoff_exciton) {
    if (na_ < 1 || nb_ < 1) throw DomainError("Fock cutoffs must be >= 1");
    stride_ = (nb_ + 1) % 2 == 1 ? nb_ + 1 : nb_ + 2;
    const int padded = (na_ + 1) * stride_;
    size_ = {(padded + 1) / 2, padded / 2};
    for (int i = 0; i < dimension(); ++i) phys_[sector(i)].push_back(half_index(i));
}

} // namespace uscav
