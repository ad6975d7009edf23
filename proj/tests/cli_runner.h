// Runs the astroimg executable built alongside the tests.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace astroimg::testing {

inline int runCli(const std::string& args, const std::filesystem::path& cwd = std::filesystem::current_path()) {
    const std::string cmd = "cd '" + cwd.string() + "' && '" + std::string(ASTROIMG_CLI_PATH) + "' " + args +
                            " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratchDir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("astroimg_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace astroimg::testing
