#pragma once

// Runs the bzgamma executable in a scratch directory and captures its output.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace clitest {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

class Sandbox {
public:
    explicit Sandbox(const std::string& name)
        : dir_(std::filesystem::temp_directory_path() / ("bzgamma_" + name)) {
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    ~Sandbox() { std::filesystem::remove_all(dir_); }

    std::filesystem::path path(const std::string& file) const { return dir_ / file; }

    Result run(const std::string& args) const {
        const auto out = dir_ / ".stdout";
        const auto err = dir_ / ".stderr";
        const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(BZGAMMA_CLI) + "' " + args +
                                " > '" + out.string() + "' 2> '" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

private:
    std::filesystem::path dir_;
};

}  // namespace clitest
