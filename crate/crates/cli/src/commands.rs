use std::path::Path;

use log::info;
use ssfilt_core::io::{read_field, read_image, Format, Loaded};
use ssfilt_core::metrics::{ergas, region_stats, total_variation, MetricReport};
use ssfilt_core::pipelines::{self, BlurMode, PipelineConfig, Preset};
use ssfilt_core::{filter, Kappa};

use crate::args::{BlurModeArg, Command, KappaSource, MetricCommand, ParamArgs};
use crate::config::parse_config;
use crate::error::{CliError, CliResult};
use crate::output::{save_field_pfm, save_image};

/// Layers preset, config file and flags into a validated config.
/// `gain_map` commands derive kappa per pixel and refuse a scalar one.
fn settings(params: &ParamArgs, fallback: Option<Preset>, gain_map: bool) -> CliResult<PipelineConfig> {
    let file = match &params.config {
        Some(path) => parse_config(path)?,
        None => Default::default(),
    };
    let merged = file.layered(params.overrides());
    let cfg = merged.resolve(fallback)?;
    if gain_map && merged.kappa.is_some() {
        return Err(CliError::usage("`kappa`: this command derives a per-pixel gain; set kappa_min/kappa_max instead"));
    }
    Ok(cfg)
}

fn no_kappa_map(params: &ParamArgs) -> CliResult<()> {
    match params.kappa_map {
        Some(_) => Err(CliError::usage("`--kappa-map` only applies to the filter command")),
        None => Ok(()),
    }
}

/// Rejects unsupported output extensions before any input is read.
fn check_output(path: &Path) -> CliResult<Format> {
    Ok(Format::from_path(path)?)
}

fn blur_mode(mode: BlurModeArg) -> BlurMode {
    match mode {
        BlurModeArg::Smooth => BlurMode::SmoothDefocus,
        BlurModeArg::Sharpen => BlurMode::SharpenDefocus,
    }
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Filter {
            self_guided: _,
            guide,
            params,
            input,
            output,
        } => {
            let mut cfg = settings(&params, None, false)?;
            check_output(&output)?;
            let Loaded { image, depth } = read_image(&input)?;
            let guide = guide.map(|g| read_image(&g)).transpose()?.map(|l| l.image);
            if let Some(path) = &params.kappa_map {
                cfg.filter.kappa = Kappa::Field(read_field(path)?);
            }
            let out = filter(&image, guide.as_ref(), &cfg.filter)?;
            save_image(&output, &out, depth)?;
        }
        Command::Kappa {
            source,
            input,
            output,
            guide,
            mode,
            params,
        } => {
            no_kappa_map(&params)?;
            let fallback = match source {
                KappaSource::Depth => Preset::PortraitSdof,
                KappaSource::Blur => Preset::Blur,
                KappaSource::Mask => Preset::Face,
            };
            let cfg = settings(&params, Some(fallback), true)?;
            if check_output(&output)? != Format::Pfm {
                return Err(CliError::usage("gain maps are written as .pfm"));
            }
            let kappa = match source {
                KappaSource::Depth => pipelines::sdof_kappa(&read_field(&input)?, &cfg)?,
                KappaSource::Blur => pipelines::blur_kappa(&read_image(&input)?.image, &cfg, blur_mode(mode))?,
                KappaSource::Mask => {
                    let guide = guide.ok_or_else(|| CliError::usage("`--guide`: the mask source needs the image it belongs to"))?;
                    let mask = read_field(&input)?;
                    pipelines::face_kappa(&read_image(&guide)?.image, &mask, &cfg)?
                }
            };
            save_field_pfm(&output, &kappa)?;
        }
        Command::Sdof {
            input,
            depth,
            output,
            params,
        } => {
            no_kappa_map(&params)?;
            let cfg = settings(&params, Some(Preset::PortraitSdof), true)?;
            check_output(&output)?;
            let img = read_image(&input)?;
            let out = pipelines::sdof(&img.image, &read_field(&depth)?, &cfg)?;
            save_image(&output, &out, img.depth)?;
        }
        Command::Blur {
            input,
            output,
            mode,
            params,
        } => {
            no_kappa_map(&params)?;
            let cfg = settings(&params, Some(Preset::Blur), true)?;
            check_output(&output)?;
            let img = read_image(&input)?;
            let out = pipelines::blur_guided(&img.image, &cfg, blur_mode(mode))?;
            save_image(&output, &out, img.depth)?;
        }
        Command::Face {
            input,
            mask,
            output,
            params,
        } => {
            no_kappa_map(&params)?;
            let cfg = settings(&params, Some(Preset::Face), true)?;
            check_output(&output)?;
            let img = read_image(&input)?;
            let out = pipelines::face_enhance(&img.image, &read_field(&mask)?, &cfg)?;
            save_image(&output, &out, img.depth)?;
        }
        Command::Flashfusion {
            noflash,
            flash,
            output,
            params,
        } => {
            no_kappa_map(&params)?;
            let cfg = settings(&params, Some(Preset::FlashFusion), false)?;
            check_output(&output)?;
            let dark = read_image(&noflash)?;
            let out = pipelines::flash_noflash(&dark.image, &read_image(&flash)?.image, &cfg)?;
            save_image(&output, &out, dark.depth)?;
        }
        Command::Pansharpen {
            ms,
            pan,
            output,
            params,
        } => {
            no_kappa_map(&params)?;
            let cfg = settings(&params, Some(Preset::Pansharpen), false)?;
            check_output(&output)?;
            let bands = read_image(&ms)?;
            let out = pipelines::pansharpen(&bands.image, &read_field(&pan)?, &cfg)?;
            save_image(&output, &out, bands.depth)?;
        }
        Command::Metric { metric, csv } => {
            let reports = metric_reports(metric)?;
            print!("{}", render(&reports, csv));
            return Ok(());
        }
    }
    info!("done");
    Ok(())
}

fn metric_reports(metric: MetricCommand) -> CliResult<Vec<MetricReport>> {
    Ok(match metric {
        MetricCommand::Tv { image, mask } => {
            let img = read_image(&image)?.image;
            let mask = mask.as_deref().map(read_field).transpose()?;
            vec![total_variation(&img, mask.as_ref())?]
        }
        MetricCommand::Ergas { fused, reference, ratio } => {
            if !(ratio.is_finite() && ratio > 0.0) {
                return Err(CliError::usage(format!("`ratio`: must be finite and > 0, got {ratio}")));
            }
            vec![ergas(&read_image(&fused)?.image, &read_image(&reference)?.image, ratio)?]
        }
        MetricCommand::Region { image, mask } => {
            let img = read_image(&image)?.image;
            let stats = region_stats(&img, &read_field(&mask)?)?;
            let label = mask.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            stats.reports(&label)
        }
    })
}

fn render(reports: &[MetricReport], csv: bool) -> String {
    if csv {
        let mut s = format!("{}\n", MetricReport::CSV_HEADER);
        for r in reports {
            s.push_str(&r.to_csv_row());
            s.push('\n');
        }
        s
    } else {
        reports.iter().map(|r| r.to_key_value()).collect::<Vec<_>>().join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_one_header_and_one_row_per_report() {
        let reports = vec![MetricReport::new("tv", 1.0), MetricReport::new("mean", 0.5).with_region("m.png")];
        let text = render(&reports, true);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], MetricReport::CSV_HEADER);
        let kv = render(&reports, false);
        assert!(kv.contains("metric = tv") && kv.contains("metric = mean"));
    }

    #[test]
    fn pipeline_commands_reject_a_scalar_kappa() {
        let params = ParamArgs {
            kappa: Some(2.0),
            ..ParamArgs::default()
        };
        assert!(settings(&params, Some(Preset::Face), true).is_err());
        assert!(settings(&params, Some(Preset::FlashFusion), false).is_ok());
        assert!(settings(&params, None, false).is_ok());
    }
}
