#pragma once

#include "sheafrig/barcode.hpp"

#include <random>

namespace oracle {

// Random bar of the left-closed/right-open class (ambient ends allowed) over integer endpoints.
inline sheafrig::Bar random_sigma_positive_bar(std::mt19937_64& rng, int max_endpoint = 6)
{
    using sheafrig::Endpoint;
    std::uniform_int_distribution<int> kind(0, 3), val(0, max_endpoint), deg(-2, 2);
    int a = val(rng), b = val(rng);
    if (a > b)
        std::swap(a, b);
    if (a == b)
        ++b;
    switch (kind(rng)) {
    case 0: return {Endpoint::closed_at(a), Endpoint::open_at(b), deg(rng)};
    case 1: return {Endpoint::neg_inf(), Endpoint::open_at(b), deg(rng)};
    case 2: return {Endpoint::closed_at(a), Endpoint::pos_inf(), deg(rng)};
    default: return {Endpoint::neg_inf(), Endpoint::pos_inf(), deg(rng)};
    }
}

inline sheafrig::Barcode random_sigma_positive_barcode(std::mt19937_64& rng, int max_bars = 6)
{
    sheafrig::Barcode bc;
    std::uniform_int_distribution<int> count(0, max_bars);
    int n = count(rng);
    for (int i = 0; i < n; ++i)
        bc.bars.push_back(random_sigma_positive_bar(rng));
    bc.sort();
    return bc;
}

} // namespace oracle
