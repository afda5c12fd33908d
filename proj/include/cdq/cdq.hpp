#pragma once

#include "cdq/bits.hpp"
#include "cdq/circuit.hpp"
#include "cdq/enumeration.hpp"
#include "cdq/error.hpp"
#include "cdq/normal_form.hpp"
#include "cdq/phase_poly.hpp"
#include "cdq/rewrite.hpp"
#include "cdq/semantics.hpp"
