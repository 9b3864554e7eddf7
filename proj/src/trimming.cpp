#include "trimlab/trimming.hpp"

#include <sstream>

namespace trimlab {

TrimSpec TrimSpec::parse(const std::string& s) {
    TrimSpec t;
    auto bad = [&] { throw ConfigError("bad trim spec: " + s); };
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 2 && parts[0] == "light") {
            t.mode = Mode::Light;
            t.K = std::stoull(parts[1]);
        } else if (parts.size() == 3 && parts[0] == "inter" && parts[1] == "pow") {
            t.mode = Mode::PowerLaw;
            t.exponent = std::stod(parts[2]);
            if (t.exponent <= 0.0 || t.exponent >= 1.0) bad();
        } else if (parts.size() == 3 && parts[0] == "inter" && parts[1] == "polylog") {
            t.mode = Mode::PolyLog;
            t.exponent = std::stod(parts[2]);
            if (t.exponent <= 0.0) bad();
        } else {
            bad();
        }
    } catch (const std::invalid_argument&) {
        bad();
    } catch (const std::out_of_range&) {
        bad();
    }
    return t;
}

std::string TrimSpec::to_string() const {
    std::ostringstream os;
    switch (mode) {
    case Mode::Light:
        os << "light:" << K;
        break;
    case Mode::PowerLaw:
        os << "inter:pow:" << exponent;
        break;
    case Mode::PolyLog:
        os << "inter:polylog:" << exponent;
        break;
    }
    return os.str();
}

} // namespace trimlab
