#pragma once

#include "windpar/error.hpp"
#include "windpar/abelian.hpp"
#include "windpar/diagram.hpp"
#include "windpar/codec.hpp"
#include "windpar/moves.hpp"
#include "windpar/trace.hpp"
#include "windpar/parity.hpp"
#include "windpar/universal.hpp"
