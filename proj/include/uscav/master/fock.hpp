// fock.hpp — truncated two-oscillator Fock space |n_a, n_b>
//
// Public matrices use the row-major physical index n_a (N_b + 1) + n_b.
// Internally states are split by excitation parity (n_a + n_b) mod 2, which
// every Hamiltonian here conserves. Within a sector states are labelled by a
// half index: with an odd stride S >= N_b + 1 the flat index i = n_a S + n_b
// has parity i mod 2, and half index i / 2. Band offsets then survive the split.
#pragma once

#include <array>
#include <vector>

namespace uscav {

class FockSpace {
public:
    FockSpace(int cutoff_photon, int cutoff_exciton);

    int cutoff_photon() const { return na_; }
    int cutoff_exciton() const { return nb_; }
    int dimension() const { return (na_ + 1) * (nb_ + 1); }
    int index(int n_a, int n_b) const { return n_a * (nb_ + 1) + n_b; }
    int photons(int index) const { return index / (nb_ + 1); }
    int excitons(int index) const { return index % (nb_ + 1); }

    // padded internal layout
    int stride() const { return stride_; }
    int padded_dimension() const { return (na_ + 1) * stride_; }
    int sector_size(int parity) const { return size_[parity]; }
    int sector(int index) const { return (photons(index) + excitons(index)) % 2; }
    int half_index(int index) const { return (photons(index) * stride_ + excitons(index)) / 2; }
    // half indices of physical states in a sector, ascending
    const std::vector<int>& physical(int parity) const { return phys_[parity]; }
    bool padded() const { return stride_ != nb_ + 1; }

private:
    int na_, nb_, stride_;
    std::array<int, 2> size_;
    std::array<std::vector<int>, 2> phys_;
};

} // namespace uscav
