#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tollbooth/cactus.hpp"
#include "tollbooth/engine.hpp"
#include "tollbooth/evaluator.hpp"

namespace toll {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Instance file contents before cactus validation.
struct RawInstance {
    int vertices = 0;
    std::vector<Edge> edges;
    std::vector<Buyer> buyers;
};

// Throws ParseError on malformed JSON or fields.
RawInstance parse_instance(const std::string& text);

// parse_instance, then validation; throws std::invalid_argument when not a cactus or a buyer
// endpoint is out of range.
CactusInstance load_instance(const std::string& text);

std::string write_instance(const CactusInstance& inst);

struct SolutionRecord {
    Prices prices;
    Rational revenue;
    int level = 1;
    std::string subproblem;
    std::vector<Purchase> allocation;  // per buyer; paths empty when nothing bought
};

std::string write_solution(const CactusInstance& inst, const Solution& sol);
SolutionRecord parse_solution(const std::string& text);

// Decomposition levels with fragments and borders, plus skeleton edges and segments per level.
std::string inspect_json(const CactusInstance& inst);

std::string read_file(const std::string& path);   // throws std::runtime_error
void write_file(const std::string& path, const std::string& text);

}  // namespace toll
