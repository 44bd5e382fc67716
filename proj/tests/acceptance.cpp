// Runs `innerlab selftest` twice, prints one line per criterion 1-12 and a summary.
// Exit status is 0 when every criterion passes except those listed in kExpectedFailures.

#include <array>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

// μ_{n,10} does not exist for n = 8, 16 (n θ log(1/θ) = 10 needs n >= 28), so the trend over n is undefined.
const std::map<int, std::string> kExpectedFailures{
    {7, "M = 10 diffuse measures are undefined for n = 8, 16"},
};

struct Capture {
    std::string out;
    int status = -1;
};

Capture run(const std::string& cmd)
{
    Capture c;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return c;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) c.out.append(buf.data(), n);
    int st = pclose(p);
    c.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-innerlab>\n";
        return 1;
    }
    const std::string cmd = std::string("\"") + argv[1] + "\" selftest --quiet";
    Capture first = run(cmd);
    Capture second = run(cmd);

    std::map<int, std::string> lines;
    std::istringstream in(first.out);
    for (std::string line; std::getline(in, line);) {
        int id = 0;
        if (std::sscanf(line.c_str(), "criterion %d", &id) == 1) lines[id] = line;
    }

    int unexpected = 0, passed = 0;
    for (int id = 1; id <= 11; ++id) {
        auto it = lines.find(id);
        std::string line = it == lines.end() ? "criterion " + std::to_string(id) + " FAIL missing: no output" : it->second;
        bool pass = line.find(" PASS ") != std::string::npos;
        auto xf = kExpectedFailures.find(id);
        if (pass) {
            ++passed;
            if (xf != kExpectedFailures.end()) {
                line += " [unexpected pass; remove it from the expected failures]";
                ++unexpected;
            }
        } else if (xf != kExpectedFailures.end()) {
            line += " [expected failure: " + xf->second + "]";
        } else {
            ++unexpected;
        }
        std::cout << line << "\n";
    }

    bool identical = !first.out.empty() && first.out == second.out && first.status == second.status;
    std::cout << "criterion 12 " << (identical ? "PASS" : "FAIL") << " determinism: two selftest runs "
              << (identical ? "byte-identical" : "differ") << " (" << first.out.size() << " bytes, exit " << first.status
              << ")\n";
    if (identical)
        ++passed;
    else
        ++unexpected;

    std::cout << "acceptance: " << passed << "/12 passed, " << unexpected << " unexpected\n";
    return unexpected == 0 ? 0 : 1;
}
