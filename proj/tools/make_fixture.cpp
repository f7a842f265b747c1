// Regenerates the bundled synthetic review corpus.
// Usage: make_fixture --n 2000 --seed 7 --out data/synthetic_reviews.jsonl

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "plrec/data_ingest.hpp"
#include "plrec/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"synthetic review corpus generator"};
    std::size_t count = 2000;
    std::uint64_t seed = 7;
    std::string out;
    app.add_option("--n", count, "number of reviews");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--out", out, "output JSON-lines file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        plrec::write_records_file(plrec::make_synthetic_reviews(count, seed), out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << "wrote " << count << " reviews -> " << out << '\n';
    return 0;
}
