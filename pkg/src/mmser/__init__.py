"""Multimodal emotion recognition over speech and text.

Speech side: a bottleneck autoencoder over weighted wav2vec layer stacks
that reconstructs mel-spectrograms while a classifier head reads emotion
from the bottleneck codes. Text side: a 1D CNN over transformer token
embeddings. Late score fusion combines the two. A speaker-identification
probe measures how much speaker identity survives the bottleneck.
"""

__version__ = "0.1.0"

EMOTIONS = ("Angry", "Neutral", "Sad", "Happy")
EMOTION_TO_INDEX = {name: i for i, name in enumerate(EMOTIONS)}
N_EMOTIONS = len(EMOTIONS)
