"""Bit-packed binary chromosomes with the length stored in the first word."""

from .errors import (
    CapacityExceededError,
    ConfigurationError,
    DegenerateFitnessError,
    IncompatibleChromosomeError,
    IncompatibleSchemaError,
    InvalidCapacityError,
    InvalidLengthError,
)
from .ga import (
    GAConfig,
    GenerationStats,
    Member,
    Population,
    RunResult,
    crossover,
    initialize_population,
    mutate,
    onemax_fitness,
    run,
    select_pair,
)
from .oracle import MemoryReport, NaiveChromosome, differential_run, memory_report
from .packed import (
    ALL_LAYOUTS,
    BitAddress,
    LayoutSpec,
    PackedChromosome,
    calculate_array_dim,
    exchange_prefix,
    flip_allele,
    get_allele,
    max_chromosome_length,
    memory_utilization,
    new_random,
    new_zero,
    pack,
    set_allele,
    unpack,
)
from .schema import (
    Schema,
    SchemaTheoremInputs,
    count_matching,
    disruption_probability,
    expected_schema_count,
    max_schemata_count,
)

__version__ = "0.1.0"
