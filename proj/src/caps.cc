#include "qbound/caps.h"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qbound {

namespace {

void read_env(const char* name, std::size_t& out) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') {
        return;
    }
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
        value = std::stoul(raw, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(name) + " must be a non-negative integer");
    }
    if (raw[pos] != '\0' || value > 62) {
        throw std::invalid_argument(std::string(name) + " must be an integer in [0, 62]");
    }
    out = value;
}

}  // namespace

Caps Caps::from_environment() {
    Caps caps;
    read_env("QBOUND_SV_QUBITS", caps.statevector_qubits);
    read_env("QBOUND_DM_QUBITS", caps.density_qubits);
    read_env("QBOUND_TABLE_QUBITS", caps.table_qubits);
    read_env("QBOUND_STOCHASTIC_QUBITS", caps.stochastic_qubits);
    return caps;
}

}  // namespace qbound
