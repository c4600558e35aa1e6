#include "bprobe/textgen.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "bprobe/error.hpp"

#include "json.hpp"

namespace bprobe::text {

namespace {
constexpr int kMaxConsecutiveMalformed = 10;
}

GeneratorPlugin::GeneratorPlugin(std::vector<std::string> argv) {
    if (argv.empty())
        throw Error(ErrorCode::SpawnFailure, "empty plugin command");

    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw Error(ErrorCode::SpawnFailure,
                    std::string("pipe: ") + std::strerror(errno));

    pid_t pid = fork();
    if (pid < 0)
        throw Error(ErrorCode::SpawnFailure,
                    std::string("fork: ") + std::strerror(errno));

    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);

        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (std::string& a : argv) args.push_back(a.data());
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(to_child[0]);
    close(from_child[1]);
    child_pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
}

GeneratorPlugin::~GeneratorPlugin() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (child_pid_ > 0) {
        kill(child_pid_, SIGTERM);
        int status = 0;
        waitpid(child_pid_, &status, 0);
    }
}

std::string GeneratorPlugin::read_line() {
    while (true) {
        std::size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char chunk[4096];
        ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n <= 0)
            throw Error(ErrorCode::SpawnFailure,
                        "plugin closed its output stream");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

PostDraft GeneratorPlugin::next(PostCategory category) {
    nlohmann::json req;
    req["category"] = post_category_name(category);
    std::string line = req.dump() + "\n";
    ssize_t written = write(to_child_, line.data(), line.size());
    if (written != static_cast<ssize_t>(line.size()))
        throw Error(ErrorCode::SpawnFailure, "plugin request write failed");

    int consecutive_malformed = 0;
    while (true) {
        std::string response = read_line();
        try {
            nlohmann::json j = nlohmann::json::parse(response);
            PostDraft p;
            p.category = category;
            p.title = j.at("title").get<std::string>();
            p.description = j.at("description").get<std::string>();
            return p;
        } catch (const nlohmann::json::exception&) {
            ++skipped_;
            if (++consecutive_malformed >= kMaxConsecutiveMalformed)
                throw Error(ErrorCode::ProtocolViolation,
                            "plugin emitted " +
                                std::to_string(consecutive_malformed) +
                                " consecutive malformed lines");
        }
    }
}

} // namespace bprobe::text
