#pragma once

#include "dks/error.hpp"
#include "dks/zpfield.hpp"
#include "dks/bigint.hpp"
#include "dks/pcgroup.hpp"
#include "dks/kodaira.hpp"
#include "dks/surface.hpp"
#include "dks/json_io.hpp"
