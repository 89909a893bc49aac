#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace ob2d {

template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

    template <class U>
    struct rebind {
        using other = AlignedAllocator<U, Alignment>;
    };

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Alignment}));
    }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Alignment}); }

    friend bool operator==(const AlignedAllocator&, const AlignedAllocator&) noexcept { return true; }
};

using Complex = std::complex<double>;
using RealArray = std::vector<double, AlignedAllocator<double>>;
using ComplexArray = std::vector<Complex, AlignedAllocator<Complex>>;

} // namespace ob2d
