#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "sib/config.hpp"

namespace sib {

struct CommonOptions {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool quiet = false;
};

// Each command throws ConfigError / DataError / NumericalError on failure;
// run_command maps those to exit codes 1 / 2 / 3 and prints a machine-
// readable error JSON on stderr.
void run_fit(const std::filesystem::path& config_path,
             const CommonOptions& options);
void run_predict(const std::filesystem::path& model_dir,
                 const std::filesystem::path& config_path,
                 const CommonOptions& options);
void run_simulate(const std::filesystem::path& config_path,
                  const CommonOptions& options);
void run_evaluate(const std::filesystem::path& estimated_dir,
                  const std::filesystem::path& truth_dir,
                  const CommonOptions& options);
void run_reproduce(const std::string& setting, int reps,
                   const CommonOptions& options);

int run_command(const std::function<void()>& body, bool quiet = false);

}  // namespace sib
