"""Protocol engines: classical toy scheme, BCJL, unitary scripts, two-party toy."""

from .bcjl import (BCJLParams, BCJLVerdict, bcjl_run, bob_reduced_matrices,
                   commit_state, concealment_fidelity, error_test)
from .classical import (break_commitment, classical_commit, classical_open,
                        classical_verify, invert_by_search, toy_one_way)
from .script import (Step, UnitaryScript, compile_unitary, script_execute,
                     script_states, script_transcript, script_verify)
from .transcript import Message, Phase, ProtocolTranscript
from .twoparty import two_party_protocol

__all__ = [
    "BCJLParams", "BCJLVerdict", "bcjl_run", "bob_reduced_matrices", "commit_state",
    "concealment_fidelity", "error_test",
    "break_commitment", "classical_commit", "classical_open", "classical_verify",
    "invert_by_search", "toy_one_way",
    "Step", "UnitaryScript", "compile_unitary", "script_execute", "script_states",
    "script_transcript", "script_verify",
    "Message", "Phase", "ProtocolTranscript",
    "two_party_protocol",
]
