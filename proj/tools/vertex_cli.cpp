#include "vertex/fixtures.hpp"
#include "vertex/script.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

// vertex [--fixtures DIR] run FILE
// vertex [--fixtures DIR] eval TEXT
// vertex [--fixtures DIR] COMMAND [ARGS...]     e.g. vertex wzw-verify --n 1 --k 3
// vertex derive-fixtures DIR
int main(int argc, char** argv) {
    CLI::App app{"Exact Poisson vertex algebra calculator"};
    app.prefix_command();
    std::string fixtures;
    app.add_option("--fixtures", fixtures, "Directory of derived structure-constant files")->check(CLI::ExistingDirectory);

    std::string file;
    auto* run = app.add_subcommand("run", "Run a script file");
    run->add_option("file", file, "Script")->required();

    std::vector<std::string> text;
    auto* eval = app.add_subcommand("eval", "Run statements given on the command line");
    eval->add_option("text", text, "Statements")->required();

    std::string out_dir;
    auto* derive = app.add_subcommand("derive-fixtures", "Recompute and write the fixture files");
    derive->add_option("dir", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return vertex::exit_usage;
    }

    vertex::Interpreter interp(std::cout);
    if (!fixtures.empty()) interp.set_fixtures(vertex::FixtureStore(fixtures));

    try {
        if (*derive) {
            vertex::derive_fixtures(out_dir);
            std::cout << "wrote fixtures to " << out_dir << "\n";
            return vertex::exit_ok;
        }
        if (*run) {
            std::ifstream in(file);
            if (!in) {
                std::cerr << "cannot read " << file << "\n";
                return vertex::exit_usage;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            return interp.run(ss.str());
        }
        std::string statement;
        const std::vector<std::string>& words = *eval ? text : app.remaining();
        if (words.empty()) {
            std::cerr << app.help();
            return vertex::exit_usage;
        }
        for (const auto& w : words) statement += (statement.empty() ? "" : " ") + w;
        return interp.run(statement);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return vertex::exit_usage;
    }
}
