#pragma once

#include <string>
#include <vector>

namespace eseek::cli {

// Exit codes: 0 success, 1 configuration/usage error, 2 divergence detected.

int cmd_run(const std::string& config_path, const std::string& out_csv,
            const std::string& plot_svg);

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& grid_tokens,
              const std::string& out_csv);

int cmd_verify(const std::string& suite);

int main(int argc, char** argv);

}  // namespace eseek::cli
