#include "quadseq/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        quadseq::cli::RunConfig cfg = quadseq::cli::parse_args(args);
        quadseq::cli::Report rep = quadseq::cli::run(cfg);
        quadseq::cli::emit(rep, cfg.format, cfg.out_path);
        return rep.exit_code;
    } catch (const quadseq::cli::InfoRequested& info) {
        std::cout << info.text;
        if (info.text.empty() || info.text.back() != '\n') std::cout << "\n";
        return 0;
    } catch (const quadseq::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
