//! v-tasks, correct policies, inference and the task space.

mod file;
mod space;
mod task;

pub use file::{load_task, parse_task, task_to_json, EnvSource, TaskFile};
pub use space::{
    count_tasks, count_tasks_by_inputs, count_tasks_with, enumerate_tasks, enumerate_tasks_bounded,
    sample_task, TaskSpace, UpClass, MAX_CLASSES,
};
pub use task::{is_child, Inference, PolicySet, Task};
