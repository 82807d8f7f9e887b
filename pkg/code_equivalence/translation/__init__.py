from code_equivalence.translation.bounds import gamma, gamma_prime, resolve_tv_coefficient, \
    zeta, zeta_branch
from code_equivalence.translation.codes import CodewordLayout, rewrite_relay, translate_i2n, \
    translate_n2i, translate_n2i_code
from code_equivalence.translation.sigma import DecodingMap, Lemma1Check, SigmaDiagnostics, \
    SigmaNetworkCode, build_network_code_from_sigma, check_lemma1, check_proposition1, \
    decodable_set, proposition2_witness, select_sigma
from code_equivalence.translation.theorems import TranslationReport, verify_theorem

__all__ = [
    'CodewordLayout', 'DecodingMap', 'Lemma1Check', 'SigmaDiagnostics', 'SigmaNetworkCode',
    'TranslationReport',
    'build_network_code_from_sigma', 'check_lemma1', 'check_proposition1', 'decodable_set',
    'gamma', 'gamma_prime', 'proposition2_witness', 'resolve_tv_coefficient', 'rewrite_relay',
    'select_sigma', 'translate_i2n', 'translate_n2i', 'translate_n2i_code', 'verify_theorem',
    'zeta', 'zeta_branch',
]
