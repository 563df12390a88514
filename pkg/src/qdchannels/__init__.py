"""Local quantum channels that cannot create quantum discord.

Channel construction and CPTP checks, family classification with parameter
recovery, the block criterion for zero discord, numerical discord, qubit
Bloch-ball geometry, and Monte-Carlo verification campaigns.
"""
from .bloch import (
    BlochAffineMap,
    channel_bloch_map,
    commute_iff_collinear,
    from_bloch,
    param_bloch_map,
    rotation_from_unitary,
    to_bloch,
)
from .campaigns import RunConfig, TheoremId, TrialReport, verify
from .channel import (
    Branch,
    ChoiMatrix,
    DecoheringParams,
    IsotropicParams,
    QuantumChannel,
    QubitCPUParams,
    amplitude_damping,
    apply,
    choi_from_kraus,
    identity_channel,
    is_cptp,
    kraus_from_choi,
    make_decohering,
    make_isotropic,
    make_qubit_cpu,
)
from .classify import (
    ChannelClass,
    NoFit,
    Verdict,
    both_directions,
    classify,
    extract_decohering,
    fit_isotropic,
    fit_qubit_cpu,
    preserves_commutativity_probe,
    range_commutative,
)
from .discord import (
    BipartiteState,
    DiscordConfig,
    MeasurementBasis,
    discord_b,
    is_zero_discord_b,
    mutual_information,
    post_measurement,
    von_neumann_entropy,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
