#include "gradkernel/script.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Exact kernel for Z-graded commutative algebras"};
    std::string path;
    std::optional<int> order;
    bool json = false;
    app.add_option("script", path, "Script file, or - for stdin")->required();
    app.add_option("--order", order, "Truncation order p (overrides the script)");
    app.add_flag("--json", json, "Structured output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return gradkernel::script::kExitError;
    }

    std::string source;
    if (path == "-") {
        source.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            std::cerr << "gradkernel: cannot open '" << path << "'\n";
            return gradkernel::script::kExitError;
        }
        source.assign(std::istreambuf_iterator<char>(in), {});
    }
    gradkernel::script::RunOptions options;
    options.order = order;
    options.json = json;
    return gradkernel::script::run(source, options, std::cout, std::cerr);
}
