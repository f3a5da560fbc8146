#pragma once

#include "roughkm/clustering.hpp"
#include "roughkm/data_model.hpp"
#include "roughkm/error.hpp"
#include "roughkm/evaluation.hpp"
#include "roughkm/pipeline.hpp"
#include "roughkm/roughset.hpp"
#include "roughkm/serialize.hpp"
#include "roughkm/synthetic.hpp"
