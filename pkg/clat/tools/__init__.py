"""The core functionality"""

from ._mapping import (
    LatentVector,
    MappingModel,
    SynthesisModel,
    init_models,
    map_conditional,
    p_transform,
    synthesize,
    synthesize_grad,
)
from ._gaussian import (
    ConditionGaussian,
    FDMatrix,
    sample_condition_points,
    sample_latents,
    fit_gaussian,
    log_pdf,
    classify,
    frechet_distance,
    fd_matrix,
)
from ._pca import (
    PCAProjection,
    pca_project,
    pca,
    confidence_ellipse,
)
from ._latent_ops import (
    CenterOfMass,
    TransformationVector,
    center_of_mass,
    truncate,
    distance_to_center,
    transformation_vector,
    apply_transformation,
    conditional_interpolate,
    invert,
)
from ._metrics import (
    EmbeddingFunction,
    JointSample,
    MetricReport,
    joint_samples,
    fid,
    fjd,
    select_entries,
    intra_fid,
    e_qual,
    n_qual,
    e_art,
    fid_convergence,
    qualitative_plan,
)
from ._pipeline import (
    LATENT_TOOLS,
    dataset_conditions,
    run_fit,
    load_fit,
    run_analysis,
    run_evaluate,
    run_latent_tools,
)
