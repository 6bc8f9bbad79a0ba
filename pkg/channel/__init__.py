"""
宽带信道建模
"""
from channel.ofdm import channel_frequency_response, dft_matrix
from channel.pathloss import LinkType, path_loss_db
from channel.realization import (
    ChannelRealization,
    assemble_cir_matrix,
    autocorrelation,
    cascade_taps,
    generate_realization,
)

__all__ = [
    "LinkType",
    "path_loss_db",
    "ChannelRealization",
    "cascade_taps",
    "assemble_cir_matrix",
    "autocorrelation",
    "generate_realization",
    "channel_frequency_response",
    "dft_matrix",
]
