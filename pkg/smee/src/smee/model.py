"""Sequence tagger with a trigger head and a pairwise argument-role head.

Token path: embedding -> BiLSTM -> per-token features -> fully connected
trigger classifier over the 239-label alphabet. Argument path: for every
(trigger, entity) candidate pair, each token's features are concatenated
with the trigger-class probability vector and two position-feature
embeddings (distance to trigger, distance to entity), passed through a
1-D convolution with max pooling, then through fully connected
identification (2-way) and role (22-way) heads.

Ablations: `no_lstm` feeds embeddings forward directly; `no_cnn` replaces
convolution+max-pool with a masked mean over the concatenated vectors.
"""

from __future__ import annotations

import torch
from torch import nn

from .config import ModelConfig
from .encoding import EncodedBatch


class EventTagger(nn.Module):
    def __init__(
        self,
        vocab_size: int,
        n_trigger_labels: int,
        n_role_labels: int,
        config: ModelConfig,
        pretrained_embeddings: torch.Tensor | None = None,
    ):
        super().__init__()
        self.config = config
        self.n_trigger_labels = n_trigger_labels
        self.embed = nn.Embedding(vocab_size, config.word_embedding_dim, padding_idx=0)
        if pretrained_embeddings is not None:
            with torch.no_grad():
                self.embed.weight[: pretrained_embeddings.shape[0]] = pretrained_embeddings
        self.dropout = nn.Dropout(config.dropout)

        if config.ablation == "no_lstm":
            self.lstm = None
            token_dim = config.word_embedding_dim
        else:
            self.lstm = nn.LSTM(
                config.word_embedding_dim, config.lstm_hidden,
                batch_first=True, bidirectional=True,
            )
            token_dim = 2 * config.lstm_hidden
        self.token_dim = token_dim

        self.trigger_head = nn.Sequential(
            nn.Linear(token_dim, config.hidden_trigger),
            nn.ReLU(),
            nn.Dropout(config.dropout),
            nn.Linear(config.hidden_trigger, n_trigger_labels),
        )

        n_pf = 2 * config.max_len + 1
        self.pf_trigger_embed = nn.Embedding(n_pf, config.pf_dim)
        self.pf_entity_embed = nn.Embedding(n_pf, config.pf_dim)
        pair_dim = token_dim + n_trigger_labels + 2 * config.pf_dim

        if config.ablation == "no_cnn":
            self.conv = None
            arg_dim = pair_dim
        else:
            self.conv = nn.Conv1d(
                pair_dim, config.cnn_filters, config.cnn_window,
                padding=config.cnn_window // 2,
            )
            arg_dim = config.cnn_filters

        self.arg_id_head = nn.Sequential(
            nn.Linear(arg_dim, config.hidden_arg_id),
            nn.ReLU(),
            nn.Dropout(config.dropout),
            nn.Linear(config.hidden_arg_id, 2),
        )
        self.role_head = nn.Sequential(
            nn.Linear(arg_dim, config.hidden_arg_cls),
            nn.ReLU(),
            nn.Dropout(config.dropout),
            nn.Linear(config.hidden_arg_cls, n_role_labels),
        )

    def token_features(self, batch: EncodedBatch) -> torch.Tensor:
        emb = self.dropout(self.embed(batch.token_ids))
        if self.lstm is None:
            return emb
        # packed so pad positions cannot leak into real tokens through the
        # backward direction
        lengths = batch.mask.sum(dim=1).clamp(min=1)
        packed = nn.utils.rnn.pack_padded_sequence(
            emb, lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        out, _ = self.lstm(packed)
        out, _ = nn.utils.rnn.pad_packed_sequence(
            out, batch_first=True, total_length=emb.shape[1]
        )
        return out

    def forward(self, batch: EncodedBatch):
        """Returns (trigger logits B x L x 239, arg-id logits P x 2,
        role logits P x 22)."""
        if batch.n_sentences == 0:
            L = batch.token_ids.shape[1]
            return (
                torch.empty((0, L, self.n_trigger_labels)),
                torch.empty((0, 2)),
                torch.empty((0, self.role_head[-1].out_features)),
            )
        feats = self.token_features(batch)              # B x L x D
        trigger_logits = self.trigger_head(feats)       # B x L x 239

        if batch.n_pairs == 0:
            return (
                trigger_logits,
                torch.empty((0, 2)),
                torch.empty((0, self.role_head[-1].out_features)),
            )

        probs = torch.softmax(trigger_logits, dim=-1)   # B x L x 239
        sent = batch.pair_sent                          # P
        pair_feats = torch.cat(
            [
                feats[sent],                            # P x L x D
                probs[sent],                            # P x L x 239
                self.pf_trigger_embed(batch.pf_trigger),
                self.pf_entity_embed(batch.pf_entity),
            ],
            dim=-1,
        )                                               # P x L x pair_dim
        mask = batch.mask[sent]                         # P x L

        if self.conv is None:
            denom = mask.sum(dim=1, keepdim=True).clamp(min=1)
            pooled = (pair_feats * mask.unsqueeze(-1)).sum(dim=1) / denom
        else:
            conv_in = pair_feats.transpose(1, 2)        # P x pair_dim x L
            conv_out = torch.relu(self.conv(conv_in))   # P x filters x L
            neg_inf = torch.finfo(conv_out.dtype).min
            conv_out = conv_out.masked_fill(~mask.unsqueeze(1), neg_inf)
            pooled = conv_out.max(dim=2).values

        pooled = self.dropout(pooled)
        return trigger_logits, self.arg_id_head(pooled), self.role_head(pooled)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
