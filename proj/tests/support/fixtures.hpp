#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "banditmt/replay_log.hpp"
#include "banditmt/rng.hpp"

namespace testing_support {

/// Directory holding the shipped fixture logs (set by CMake).
std::filesystem::path fixture_dir();

/// Rows with the given per-arm COMET values (BLEU 0, lambda is the
/// caller's concern) and optional contexts of dimension `dim`.
banditmt::ReplayDataset comet_dataset(const std::vector<std::vector<double>> &comet, std::size_t dim = 0,
                                      std::uint64_t context_seed = 1);

/// Target-free rows: rewards are the given CometKiwi values.
banditmt::ReplayDataset kiwi_dataset(const std::vector<std::vector<double>> &kiwi, std::size_t dim = 0,
                                     std::uint64_t context_seed = 1);

/// Fresh scratch directory under the build tree.
std::filesystem::path scratch_dir(const std::string &name);

} // namespace testing_support
