"""Recurrent classifier: one LSTM layer over the frames, then a dense head on the final hidden state."""
from skelsign.models.architecture import Architecture
from skelsign.numcore import LstmWeights, dense, lstm_sequence, reshape


class Recurrent(Architecture):
    "Single-layer LSTM classifier."

    def parameter_shapes(self, spec):
        width, hidden, gates = spec.input_width, spec.lstm_hidden, 4 * spec.lstm_hidden
        return {
            "lstm.input_weight": ((width, gates), width, gates),
            "lstm.hidden_weight": ((hidden, gates), hidden, gates),
            "lstm.bias": ((gates,), width, gates),
            "head.weight": ((hidden, spec.num_classes), hidden, spec.num_classes),
            "head.bias": ((spec.num_classes,), hidden, spec.num_classes),
        }

    def input_shape(self, spec):
        return (spec.t_max, spec.input_width)

    def forward(self, model, inputs):
        batch, single = self.as_batch(model.spec, inputs)
        params = model.params
        weights = LstmWeights(params["lstm.input_weight"], params["lstm.hidden_weight"], params["lstm.bias"])
        state = lstm_sequence(batch, weights)
        logits = dense(state.hidden, params["head.weight"], params["head.bias"])
        return reshape(logits, (model.spec.num_classes,)) if single else logits
