#pragma once

#include <cstdint>
#include <string>

#include "cessl/network.hpp"

namespace cessl {

// Self-describing text checkpoints. Parameters and Adam moments are written
// as C hexfloats, so a save/load round trip is bit-exact.
void save_generator(const GeneratorNet& g, const std::string& path, std::uint64_t rng_seed);
GeneratorNet load_generator(const std::string& path, std::uint64_t* rng_seed = nullptr);

void save_discriminator(const DiscriminatorNet& d, const std::string& path,
                        std::uint64_t rng_seed);
DiscriminatorNet load_discriminator(const std::string& path, std::uint64_t* rng_seed = nullptr);

}  // namespace cessl
